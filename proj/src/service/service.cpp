#include "catbench/service/service.hpp"

#include "catbench/space/dataset_io.hpp"

#include <httplib.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace catbench::service {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ApiResult error_result(int status, std::string message, std::string field = {}) {
    ordered_json body = {{"error", std::move(message)}};
    if (!field.empty())
        body["field"] = std::move(field);
    return {status, std::move(body)};
}

ordered_json named_assignment(const ParameterSpace& space, const Assignment& a) {
    ordered_json j = ordered_json::object();
    for (std::size_t i = 0; i < space.dimension() && i < a.labels.size(); ++i)
        j[space.parameter(i).name] = a.labels[i];
    return j;
}

ordered_json suggestion_json(const ParameterSpace& space, const campaign::SuggestionRecord& s) {
    ordered_json j;
    j["assignment"] = named_assignment(space, s.assignment);
    j["validity"] = to_string(s.validity);
    j["measurements"] = s.measurements ? ordered_json(*s.measurements) : ordered_json(nullptr);
    j["value"] = s.value ? ordered_json(*s.value) : ordered_json(nullptr);
    return j;
}

ordered_json best_json(const campaign::Trajectory& t) {
    const auto best = t.best();
    if (!best)
        return nullptr;
    const auto all = t.suggestions();
    return {{"assignment", named_assignment(t.space, all[best->second]->assignment)},
            {"value", best->first},
            {"position", best->second + 1}};
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> load_tokens(const std::filesystem::path& path) {
    std::map<std::string, std::string> tokens;
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read token file " + path.string());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string token, handle, extra;
        fields >> token >> handle;
        if (handle.empty() || (fields >> extra))
            throw ConfigError("token file line " + std::to_string(n) + ": expected '<token> <handle>'");
        tokens[token] = handle;
    }
    return tokens;
}

Store::Store(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty())
        std::filesystem::create_directories(dir_);
}

std::vector<ordered_json> Store::load() const {
    std::vector<ordered_json> events;
    if (dir_.empty())
        return events;
    const auto snap = dir_ / "snapshot.json";
    if (std::filesystem::exists(snap)) {
        const auto j = ordered_json::parse(read_text_file(snap));
        for (const auto& e : j.at("events"))
            events.push_back(e);
    }
    std::ifstream log(dir_ / "log.jsonl");
    std::string line;
    while (std::getline(log, line)) {
        if (trim(line).empty())
            continue;
        try {
            events.push_back(ordered_json::parse(line));
        } catch (const json::exception&) {
            // A torn final line from a crash mid-write; everything before it is intact.
            break;
        }
    }
    return events;
}

void Store::append(const ordered_json& event) {
    if (dir_.empty())
        return;
    std::lock_guard lock(mu_);
    std::ofstream log(dir_ / "log.jsonl", std::ios::app);
    log << event.dump() << "\n";
    log.flush();
    if (!log)
        throw Error("failed to append to " + (dir_ / "log.jsonl").string());
}

void Store::write_snapshot(const std::vector<ordered_json>& events) {
    if (dir_.empty())
        return;
    std::lock_guard lock(mu_);
    ordered_json snap = {{"version", 1}, {"events", events}};
    write_text_file_atomic(dir_ / "snapshot.json", snap.dump());
    std::ofstream truncate(dir_ / "log.jsonl", std::ios::trunc);
}

Service::Service(ServiceOptions options) : options_(std::move(options)), store_(options_.data_dir) {
    if (!options_.token_file.empty())
        tokens_ = load_tokens(options_.token_file);
    restore();
    for (std::size_t i = 0; i < std::max<std::size_t>(1, options_.workers); ++i)
        workers_.emplace_back([this] { worker_loop(); });
}

Service::~Service() {
    {
        std::lock_guard lock(queue_mu_);
        stopping_ = true;
    }
    queue_cv_.notify_all();
    for (auto& w : workers_)
        w.join();
}

std::optional<std::string> Service::authenticate(const std::string& auth, ApiResult& error) const {
    if (tokens_.empty())
        return std::string{};
    const std::string prefix = "Bearer ";
    if (auth.rfind(prefix, 0) != 0) {
        error = error_result(401, "missing bearer token");
        return std::nullopt;
    }
    const auto it = tokens_.find(trim(auth.substr(prefix.size())));
    if (it == tokens_.end()) {
        error = error_result(401, "unknown bearer token");
        return std::nullopt;
    }
    return it->second;
}

std::shared_ptr<Service::Campaign> Service::find(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = campaigns_.find(id);
    return it == campaigns_.end() ? nullptr : it->second;
}

std::shared_ptr<const campaign::Trajectory> Service::view_of(const Campaign& c) const {
    std::lock_guard lock(c.view_mu);
    return c.view;
}

void Service::refresh_view(Campaign& c) {
    if (!c.run)
        return;
    auto snap = std::make_shared<const campaign::Trajectory>(c.run->trajectory());
    std::lock_guard lock(c.view_mu);
    c.view = std::move(snap);
}

ordered_json Service::campaign_event(const Campaign& c) const {
    return {{"type", "campaign"},
            {"id", c.id},
            {"dataset", c.dataset},
            {"modality", campaign::to_string(c.modality)},
            {"request", c.request},
            {"published", c.published.load()},
            {"trajectory", campaign::to_json(*view_of(c))}};
}

void Service::record(const ordered_json& event) {
    if (!store_.enabled())
        return;
    std::lock_guard lock(log_mu_);
    store_.append(event);
    if (++events_since_snapshot_ < options_.snapshot_every)
        return;
    std::vector<ordered_json> events;
    std::vector<std::shared_ptr<Campaign>> all;
    {
        std::lock_guard state(mu_);
        for (const auto& [id, manifest] : dataset_manifests_)
            events.push_back({{"type", "dataset"}, {"id", id}, {"manifest", ordered_json::parse(manifest)}});
        for (const auto& [id, c] : campaigns_)
            all.push_back(c);
    }
    for (const auto& c : all)
        if (view_of(*c))
            events.push_back(campaign_event(*c));
    store_.write_snapshot(events);
    events_since_snapshot_ = 0;
}

void Service::restore() {
    std::map<std::string, ordered_json> latest;
    std::vector<std::string> order;
    for (const auto& e : store_.load()) {
        const auto type = e.value("type", std::string{});
        if (type == "dataset") {
            const auto text = e.at("manifest").dump();
            auto ds = std::make_shared<const BenchmarkDataset>(parse_dataset(text));
            datasets_[e.at("id").get<std::string>()] = std::move(ds);
            dataset_manifests_[e.at("id").get<std::string>()] = text;
        } else if (type == "campaign") {
            const auto id = e.at("id").get<std::string>();
            if (!latest.contains(id))
                order.push_back(id);
            latest[id] = e;
        }
    }
    for (const auto& id : order)
        restore_campaign(latest[id]);
}

void Service::restore_campaign(const ordered_json& e) {
    auto c = std::make_shared<Campaign>();
    c->id = e.at("id").get<std::string>();
    c->dataset = e.at("dataset").get<std::string>();
    c->modality = campaign::modality_from_string(e.at("modality").get<std::string>());
    c->request = e.at("request");
    c->published = e.value("published", false);
    auto stored = campaign::trajectory_from_json(e.at("trajectory"));

    if (stored.status == campaign::RunStatus::running && c->modality == campaign::Modality::human) {
        std::string field;
        auto config = build_config(c->request, field);
        auto human = std::make_unique<HumanOptimizer>();
        c->human = human.get();
        c->run = std::make_unique<campaign::CampaignRun>(std::move(config), 0, std::move(human));
        for (const auto& it : stored.iterations) {
            Suggestion s;
            for (const auto& sr : it.suggestions) {
                s.assignments.push_back(sr.assignment);
                s.validity.push_back(sr.validity == Validity::invalid_option ? Validity::invalid_option
                                                                             : Validity::valid);
            }
            s.reasoning = it.reasoning;
            c->human->stage(std::move(s));
            c->run->step(it.author);
        }
        c->run->mutable_trajectory() = stored;
        refresh_view(*c);
    } else {
        if (stored.status == campaign::RunStatus::running) {
            stored.status = campaign::RunStatus::aborted;
            stored.abort_reason = "interrupted by service restart";
        }
        c->view = std::make_shared<const campaign::Trajectory>(std::move(stored));
    }
    if (c->id.size() > 1 && c->id[0] == 'c') {
        try {
            counter_ = std::max<std::size_t>(counter_, std::stoul(c->id.substr(1)));
        } catch (const std::exception&) {
        }
    }
    campaigns_[c->id] = std::move(c);
}

ApiResult Service::create_dataset(const std::string& body, const std::string& auth) {
    ApiResult err;
    if (!authenticate(auth, err))
        return err;
    BenchmarkDataset ds;
    try {
        ds = parse_dataset(body);
    } catch (const DatasetFormatError& e) {
        auto r = error_result(400, e.diagnostic().message);
        r.body["line"] = e.diagnostic().line;
        return r;
    } catch (const Error& e) {
        return error_result(400, e.what());
    }
    const std::string id = ds.name();
    const std::string manifest = ordered_json::parse(serialize_dataset(ds)).dump();
    {
        std::lock_guard lock(mu_);
        if (auto it = dataset_manifests_.find(id); it != dataset_manifests_.end()) {
            if (it->second == manifest)
                return {200, {{"id", id}, {"created", false}}};
            return error_result(409, "a different dataset named '" + id + "' is already registered");
        }
        datasets_[id] = std::make_shared<const BenchmarkDataset>(std::move(ds));
        dataset_manifests_[id] = manifest;
    }
    record({{"type", "dataset"}, {"id", id}, {"manifest", ordered_json::parse(manifest)}});
    return {201, {{"id", id}, {"created", true}}};
}

namespace {

ordered_json dataset_summary(const std::string& id, const BenchmarkDataset& ds) {
    ordered_json j;
    j["id"] = id;
    j["name"] = ds.name();
    j["provenance"] = ds.provenance();
    j["selectivity"] = ds.selectivity();
    j["parameters"] = ordered_json::array();
    for (const auto& p : ds.space().parameters())
        j["parameters"].push_back({{"name", p.name}, {"options", p.options}});
    j["objectives"] = ordered_json::array();
    for (const auto& o : ds.objectives())
        j["objectives"].push_back({{"name", o.name}, {"goal", to_string(o.goal)}, {"tolerance", o.tolerance}});
    j["cardinality"] = ds.space().cardinality();
    j["measured_keys"] = ds.table().size();
    return j;
}

} // namespace

ApiResult Service::list_datasets() const {
    std::lock_guard lock(mu_);
    ordered_json list = ordered_json::array();
    for (const auto& [id, ds] : datasets_)
        list.push_back(dataset_summary(id, *ds));
    return {200, {{"datasets", list}}};
}

ApiResult Service::get_dataset(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = datasets_.find(id);
    if (it == datasets_.end())
        return error_result(404, "unknown dataset '" + id + "'");
    return {200, dataset_summary(id, *it->second)};
}

campaign::CampaignConfig Service::build_config(const json& req, std::string& field) const {
    campaign::CampaignConfig cfg;
    auto fail = [&](const std::string& f, const std::string& msg) -> campaign::CampaignConfig {
        field = f;
        throw ConfigError(msg);
    };
    if (!req.is_object())
        return fail("", "request body must be a JSON object");
    if (!req.contains("dataset") || !req["dataset"].is_string())
        return fail("dataset", "'dataset' must be a dataset id");
    {
        std::lock_guard lock(mu_);
        const auto it = datasets_.find(req["dataset"].get<std::string>());
        if (it == datasets_.end())
            return fail("dataset", "unknown dataset");
        cfg.dataset = it->second;
    }
    cfg.dataset_ref = "service:" + req["dataset"].get<std::string>();

    json method = req.value("method", json("human"));
    if (method.is_string())
        method = json{{"modality", method}};
    if (!method.is_object() || !method.contains("modality") || !method["modality"].is_string())
        return fail("method", "'method' must be a modality name or an object with 'modality'");
    try {
        const auto modality = method["modality"].get<std::string>();
        cfg.method.modality = campaign::modality_from_string(modality);
        if (modality == "mock")
            cfg.method.provider = "mock";
        cfg.method.label = method.value("label", std::string{});
        if (cfg.method.modality == campaign::Modality::bo) {
            cfg.method.bo.acquisition = bo::acquisition_from_string(method.value("acquisition", std::string("ei")));
            cfg.method.bo.featurization =
                bo::featurization_from_string(method.value("featurization", std::string("one_hot")));
            cfg.method.bo.ucb_beta = method.value("ucb_beta", bo::kDefaultUcbBeta);
            cfg.method.bo.tolerances = method.value("tolerances", std::vector<double>{});
            for (const auto& csv : method.value("descriptor_csv", std::vector<std::string>{}))
                cfg.method.bo.descriptors.push_back(bo::parse_descriptor_csv(csv));
        }
        if (cfg.method.modality == campaign::Modality::llm) {
            cfg.method.provider = method.value("provider", std::string("mock"));
            if (method.contains("mock_script"))
                cfg.method.mock_script = method["mock_script"];
            if (method.contains("provider_config"))
                cfg.method.provider_config = llm::provider_config_from_json(method["provider_config"]);
            cfg.method.context_documents = method.value("context_documents", std::vector<std::string>{});
        }
    } catch (const json::exception& e) {
        return fail("method", e.what());
    } catch (const ConfigError& e) {
        return fail("method", e.what());
    }

    auto count = [&](const char* key, std::size_t dflt) -> std::size_t {
        if (!req.contains(key))
            return dflt;
        if (!req[key].is_number_integer() || req[key].get<long long>() < 1) {
            field = key;
            throw ConfigError(std::string("'") + key + "' must be a positive integer");
        }
        return req[key].get<std::size_t>();
    };
    cfg.budget = count("budget", kDefaultBudget);
    cfg.batch_size = count("batch_size", kDefaultBatchSize);
    cfg.repeats = 1;
    if (req.contains("seed")) {
        if (!req["seed"].is_number_unsigned() && !(req["seed"].is_number_integer() && req["seed"].get<long long>() >= 0))
            return fail("seed", "'seed' must be a non-negative integer");
        cfg.base_seed = req["seed"].get<std::uint64_t>();
    }
    try {
        cfg.aggregation = aggregation_mode_from_string(req.value("aggregation", std::string("lower_bound")));
    } catch (const Error& e) {
        return fail("aggregation", e.what());
    }
    cfg.validate();
    return cfg;
}

ApiResult Service::create_campaign(const std::string& body, const std::string& auth) {
    ApiResult err;
    if (!authenticate(auth, err))
        return err;
    json req;
    try {
        req = json::parse(body);
    } catch (const json::exception& e) {
        return error_result(400, std::string("body is not JSON: ") + e.what());
    }
    std::string field;
    campaign::CampaignConfig cfg;
    try {
        cfg = build_config(req, field);
    } catch (const Error& e) {
        if (field == "dataset" && std::string(e.what()) == "unknown dataset")
            return error_result(404, "unknown dataset", "dataset");
        return error_result(400, e.what(), field);
    }

    auto c = std::make_shared<Campaign>();
    {
        std::lock_guard lock(mu_);
        char id[32];
        std::snprintf(id, sizeof id, "c%06zu", ++counter_);
        c->id = id;
    }
    c->dataset = req["dataset"].get<std::string>();
    c->modality = cfg.method.modality;
    c->request = ordered_json::parse(req.dump());
    std::unique_ptr<Optimizer> opt;
    if (c->modality == campaign::Modality::human) {
        auto human = std::make_unique<HumanOptimizer>();
        c->human = human.get();
        opt = std::move(human);
    }
    try {
        c->run = std::make_unique<campaign::CampaignRun>(std::move(cfg), 0, std::move(opt));
    } catch (const Error& e) {
        return error_result(400, e.what());
    }
    c->run->mutable_trajectory().run_id = c->id;
    refresh_view(*c);
    {
        std::lock_guard lock(mu_);
        campaigns_[c->id] = c;
    }
    {
        std::lock_guard lock(c->mu);
        record(campaign_event(*c));
    }
    if (c->modality != campaign::Modality::human)
        enqueue(c);
    return {201, {{"id", c->id}, {"status", campaign::to_string(view_of(*c)->status)}, {"iterations", 0}}};
}

ApiResult Service::get_campaign(const std::string& id) const {
    const auto c = find(id);
    if (!c)
        return error_result(404, "unknown campaign '" + id + "'");
    const auto t = view_of(*c);
    ordered_json j;
    j["id"] = c->id;
    j["dataset"] = c->dataset;
    j["modality"] = campaign::to_string(c->modality);
    j["method"] = t->method;
    j["status"] = campaign::to_string(t->status);
    j["abort_reason"] = t->abort_reason;
    j["published"] = c->published.load();
    j["budget"] = t->budget;
    j["batch_size"] = t->batch_size;
    j["remaining"] = t->budget - std::min(t->budget, t->suggestion_count());
    j["iterations"] = t->iterations.size();
    j["next_iteration"] = t->iterations.size() + 1;
    j["best"] = best_json(*t);
    j["trajectory"] = campaign::to_json(*t);
    return {200, std::move(j)};
}

ApiResult Service::submit_suggestion(const std::string& id, const std::string& body, const std::string& auth) {
    ApiResult err;
    const auto handle = authenticate(auth, err);
    if (!handle)
        return err;
    const auto c = find(id);
    if (!c)
        return error_result(404, "unknown campaign '" + id + "'");
    json req;
    try {
        req = json::parse(body);
    } catch (const json::exception& e) {
        return error_result(400, std::string("body is not JSON: ") + e.what());
    }
    if (!req.is_object())
        return error_result(400, "body must be a JSON object");
    if (!req.contains("iteration") || !req["iteration"].is_number_integer())
        return error_result(400, "'iteration' (the 1-based iteration being submitted) is required", "iteration");

    std::lock_guard lock(c->mu);
    if (c->modality != campaign::Modality::human || !c->run)
        return error_result(409, "campaign is not accepting human suggestions");
    if (c->run->finished())
        return error_result(409, "campaign complete: budget exhausted");
    const auto& space = c->run->session().space();
    const std::size_t expected = c->run->session().iteration() + 1;
    if (req["iteration"].get<long long>() != static_cast<long long>(expected)) {
        auto r = error_result(409, "iteration conflict: the campaign is waiting for iteration " +
                                       std::to_string(expected));
        r.body["expected_iteration"] = expected;
        return r;
    }

    std::vector<json> items;
    if (req.contains("assignments") && req["assignments"].is_array())
        items.assign(req["assignments"].begin(), req["assignments"].end());
    else if (req.contains("assignment"))
        items.push_back(req["assignment"]);
    else
        return error_result(400, "'assignment' is required", "assignment");
    const std::size_t batch = c->run->session().config().batch_size;
    if (items.size() != batch)
        return error_result(400, "expected " + std::to_string(batch) + " assignment(s)", "assignment");

    Suggestion s;
    for (const auto& item : items) {
        if (!item.is_object())
            return error_result(400, "an assignment must map parameter names to option labels", "assignment");
        std::map<std::string, std::string> named;
        for (const auto& [k, v] : item.items()) {
            if (!v.is_string())
                return error_result(400, "option for '" + k + "' must be a string", "assignment." + k);
            named[k] = v.get<std::string>();
        }
        Assignment a;
        try {
            a = space.from_named(named);
        } catch (const Error& e) {
            return error_result(400, e.what(), "assignment");
        }
        for (std::size_t i = 0; i < space.dimension(); ++i) {
            if (!space.find_option(i, a.labels[i])) {
                const auto& p = space.parameter(i);
                auto r = error_result(400, "unknown option '" + a.labels[i] + "' for parameter '" + p.name + "'",
                                      "assignment." + p.name);
                r.body["valid_options"] = p.options;
                return r;
            }
        }
        s.assignments.push_back(std::move(a));
        s.validity.push_back(Validity::valid);
    }
    if (req.contains("reasoning")) {
        const auto& r = req["reasoning"];
        if (!r.is_object())
            return error_result(400, "'reasoning' must be an object", "reasoning");
        auto text = [&](const char* key, std::string& dst) -> bool {
            if (!r.contains(key) || r[key].is_null())
                return true;
            if (!r[key].is_string())
                return false;
            dst = r[key].get<std::string>();
            return true;
        };
        if (!text("analysis", s.reasoning.analysis) || !text("hypothesis", s.reasoning.hypothesis) ||
            !text("rationale", s.reasoning.rationale) || !text("recommendation", s.reasoning.recommendation))
            return error_result(400, "reasoning fields must be strings", "reasoning");
    }
    std::string author = *handle;
    if (author.empty())
        author = req.value("author", std::string("anonymous"));

    c->human->stage(std::move(s));
    const auto& rec = c->run->step(author);
    ordered_json out;
    out["iteration"] = rec.index;
    out["observations"] = ordered_json::array();
    for (const auto& sr : rec.suggestions)
        out["observations"].push_back(suggestion_json(space, sr));
    refresh_view(*c);
    const auto t = view_of(*c);
    out["remaining"] = t->budget - std::min(t->budget, t->suggestion_count());
    out["status"] = campaign::to_string(t->status);
    out["best"] = best_json(*t);
    record(campaign_event(*c));
    return {200, std::move(out)};
}

ApiResult Service::publish(const std::string& id, const std::string& auth) {
    ApiResult err;
    if (!authenticate(auth, err))
        return err;
    const auto c = find(id);
    if (!c)
        return error_result(404, "unknown campaign '" + id + "'");
    std::lock_guard lock(c->mu);
    const auto t = view_of(*c);
    if (t->status != campaign::RunStatus::complete)
        return error_result(409, "only complete campaigns can be published (status: " +
                                     std::string(campaign::to_string(t->status)) + ")");
    if (!c->published) {
        c->published = true;
        record(campaign_event(*c));
    }
    return {200, {{"id", c->id}, {"published", true}}};
}

ApiResult Service::leaderboard(const std::string& dataset) const {
    if (dataset.empty())
        return error_result(400, "query parameter 'dataset' is required", "dataset");
    std::vector<std::shared_ptr<Campaign>> all;
    {
        std::lock_guard lock(mu_);
        if (!datasets_.contains(dataset))
            return error_result(404, "unknown dataset '" + dataset + "'");
        for (const auto& [id, c] : campaigns_)
            all.push_back(c);
    }
    std::vector<std::shared_ptr<const campaign::Trajectory>> keep;
    std::vector<const campaign::Trajectory*> published;
    for (const auto& c : all) {
        if (!c->published || c->dataset != dataset)
            continue;
        keep.push_back(view_of(*c));
        published.push_back(keep.back().get());
    }
    ordered_json entries = ordered_json::array();
    std::size_t rank = 0;
    for (const auto& e : compute_leaderboard(published, dataset))
        entries.push_back({{"rank", ++rank},
                           {"dataset", e.dataset},
                           {"method", e.method},
                           {"modality", e.modality},
                           {"median_best", e.median_best},
                           {"mean_best", e.mean_best},
                           {"runs", e.runs},
                           {"trajectories", e.trajectories}});
    return {200, {{"dataset", dataset}, {"entries", entries}}};
}

ApiResult Service::trajectory(const std::string& id, std::string& text) const {
    const auto c = find(id);
    if (!c)
        return error_result(404, "unknown campaign '" + id + "'");
    text = campaign::serialize_trajectory(*view_of(*c));
    return {200, {}};
}

void Service::enqueue(std::shared_ptr<Campaign> c) {
    {
        std::lock_guard lock(queue_mu_);
        queue_.push_back(std::move(c));
    }
    queue_cv_.notify_one();
}

void Service::wait_idle() {
    std::unique_lock lock(queue_mu_);
    idle_cv_.wait(lock, [&] { return queue_.empty() && active_ == 0; });
}

void Service::worker_loop() {
    for (;;) {
        std::shared_ptr<Campaign> c;
        {
            std::unique_lock lock(queue_mu_);
            queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_)
                return;
            c = std::move(queue_.front());
            queue_.pop_front();
            ++active_;
        }
        run_machine(*c);
        {
            std::lock_guard lock(queue_mu_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

void Service::run_machine(Campaign& c) {
    for (;;) {
        {
            std::lock_guard lock(queue_mu_);
            if (stopping_)
                return;
        }
        std::lock_guard lock(c.mu);
        if (c.run->finished())
            return;
        try {
            c.run->step();
        } catch (const CampaignAbort& e) {
            c.run->mark_aborted(e.what());
        } catch (const NumericalError& e) {
            c.run->mark_aborted(std::string("numerical failure: ") + e.what());
        } catch (const SessionComplete&) {
            c.run->mutable_trajectory().status = campaign::RunStatus::complete;
        } catch (const std::exception& e) {
            c.run->mark_aborted(e.what());
        }
        refresh_view(c);
        record(campaign_event(c));
    }
}

void Service::register_routes(httplib::Server& server) {
    auto send = [](httplib::Response& res, const ApiResult& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto auth_of = [](const httplib::Request& req) { return req.get_header_value("Authorization"); };

    server.Post("/datasets", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, create_dataset(req.body, auth_of(req)));
    });
    server.Get("/datasets", [=, this](const httplib::Request&, httplib::Response& res) { send(res, list_datasets()); });
    server.Get(R"(/datasets/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, get_dataset(req.matches[1]));
    });
    server.Post("/campaigns", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, create_campaign(req.body, auth_of(req)));
    });
    server.Get(R"(/campaigns/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, get_campaign(req.matches[1]));
    });
    server.Post(R"(/campaigns/([^/]+)/suggestions)", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, submit_suggestion(req.matches[1], req.body, auth_of(req)));
    });
    server.Post(R"(/campaigns/([^/]+)/publish)", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, publish(req.matches[1], auth_of(req)));
    });
    server.Get("/leaderboard", [=, this](const httplib::Request& req, httplib::Response& res) {
        send(res, leaderboard(req.get_param_value("dataset")));
    });
    server.Get(R"(/trajectories/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
        std::string text;
        const auto r = trajectory(req.matches[1], text);
        if (r.status != 200)
            return send(res, r);
        res.status = 200;
        res.set_content(text, "application/json");
    });
    if (!options_.assets_dir.empty())
        server.set_mount_point("/", options_.assets_dir.string());
}

int serve(ServiceOptions options, const std::string& host, int port) {
    Service svc(std::move(options));
    httplib::Server server;
    svc.register_routes(server);
    std::cerr << "catbench service listening on " << host << ":" << port << std::endl;
    if (!server.listen(host, port)) {
        std::cerr << "failed to listen on " << host << ":" << port << std::endl;
        return 1;
    }
    return 0;
}

} // namespace catbench::service
