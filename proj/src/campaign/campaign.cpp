#include "catbench/campaign/campaign.hpp"

#include "catbench/core/human_optimizer.hpp"
#include "catbench/core/random_optimizer.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <thread>

namespace catbench::campaign {

using nlohmann::ordered_json;

std::string_view to_string(Modality m) {
    switch (m) {
    case Modality::random: return "random";
    case Modality::bo: return "bo";
    case Modality::llm: return "llm";
    case Modality::human: return "human";
    }
    return "random";
}

Modality modality_from_string(std::string_view s) {
    if (s == "random")
        return Modality::random;
    if (s == "bo")
        return Modality::bo;
    if (s == "llm" || s == "mock")
        return Modality::llm;
    if (s == "human")
        return Modality::human;
    throw ConfigError("unknown method '" + std::string(s) + "' (expected random, bo, llm, mock or human)");
}

std::string MethodSpec::effective_label() const {
    if (!label.empty())
        return label;
    switch (modality) {
    case Modality::random: return "random";
    case Modality::bo: return "bo-" + std::string(bo::to_string(bo.acquisition)) + "-" +
                              std::string(bo::to_string(bo.featurization));
    case Modality::llm:
        return provider == "mock" ? "llm-mock" : "llm-" + (provider_config.model.empty() ? provider : provider_config.model);
    case Modality::human: return "human";
    }
    return "method";
}

void CampaignConfig::validate() const {
    if (!dataset)
        throw ConfigError("campaign has no dataset");
    if (budget < 1)
        throw ConfigError("budget must be at least 1");
    if (batch_size < 1)
        throw ConfigError("batch size must be at least 1");
    if (repeats < 1)
        throw ConfigError("repeats must be at least 1");
    if (budget % batch_size != 0)
        throw ConfigError("batch size must divide the budget");
    const auto card = dataset->space().cardinality();
    if ((method.modality == Modality::random || method.modality == Modality::bo) && budget > card)
        throw ConfigError("budget " + std::to_string(budget) + " exceeds the " + std::to_string(card) +
                          " assignments available without replacement");
    if (method.modality == Modality::bo && batch_size != 1)
        throw ConfigError("BO supports batch size 1 only");
    if (method.modality == Modality::llm && !method.provider_factory) {
        if (method.provider == "mock") {
            if (method.mock_script.is_null())
                throw ConfigError("mock provider needs a script");
        } else if (method.provider == "http") {
            if (method.provider_config.model.empty())
                throw ConfigError("http provider needs a model name");
            method.provider_config.validate();
        } else {
            throw ConfigError("unknown provider '" + method.provider + "'");
        }
    }
}

ordered_json config_snapshot(const CampaignConfig& c) {
    ordered_json m;
    m["modality"] = to_string(c.method.modality);
    m["label"] = c.method.effective_label();
    if (c.method.modality == Modality::bo) {
        const auto& b = c.method.bo;
        m["featurization"] = bo::to_string(b.featurization);
        m["acquisition"] = bo::to_string(b.acquisition);
        m["ucb_beta"] = b.ucb_beta;
        m["tolerances"] = b.tolerances;
        m["initial_points"] = b.initial_points;
        m["restarts"] = b.restarts;
        ordered_json feats = ordered_json::array();
        if (b.featurization == bo::FeaturizationMode::descriptors)
            for (const auto& t : b.descriptors)
                feats.push_back(t.feature_names);
        m["descriptor_features"] = feats;
    }
    if (c.method.modality == Modality::llm) {
        m["provider"] = c.method.provider_factory ? "custom" : c.method.provider;
        m["provider_config"] = llm::to_json(c.method.provider_config);
        m["context_documents"] = c.method.context_documents.size();
        if (c.method.provider == "mock")
            m["mock_script"] = c.method.mock_script;
    }
    ordered_json j;
    j["dataset"] = c.dataset ? c.dataset->name() : "";
    j["dataset_ref"] = c.dataset_ref;
    j["method"] = std::move(m);
    j["budget"] = c.budget;
    j["batch_size"] = c.batch_size;
    j["repeats"] = c.repeats;
    j["base_seed"] = c.base_seed;
    j["aggregation"] = to_string(c.aggregation);
    return j;
}

std::string make_run_id(const CampaignConfig& c, std::size_t run_index) {
    char idx[32];
    std::snprintf(idx, sizeof idx, "r%03zu", run_index);
    std::string id = (c.dataset ? c.dataset->name() : std::string("dataset")) + "__" + c.method.effective_label() +
                     "__" + idx;
    for (auto& ch : id)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.'))
            ch = '_';
    return id;
}

std::unique_ptr<Optimizer> make_optimizer(const CampaignConfig& c, std::size_t run_index) {
    switch (c.method.modality) {
    case Modality::random: return std::make_unique<RandomOptimizer>();
    case Modality::bo: {
        auto cfg = c.method.bo;
        cfg.aggregation = c.aggregation;
        return std::make_unique<bo::BayesianOptimizer>(std::move(cfg));
    }
    case Modality::llm: {
        std::shared_ptr<llm::Provider> provider;
        if (c.method.provider_factory)
            provider = c.method.provider_factory(run_index);
        else if (c.method.provider == "mock")
            provider = std::make_shared<llm::MockProvider>(c.method.mock_script);
        else
            provider = std::make_shared<llm::HttpChatProvider>(c.method.provider_config);
        llm::LLMOptions opts{c.method.context_documents, c.policy(), llm::kMaxParseRetries};
        return std::make_unique<llm::LLMOptimizer>(std::move(provider), std::move(opts), c.method.effective_label());
    }
    case Modality::human: return std::make_unique<HumanOptimizer>();
    }
    throw ConfigError("unknown modality");
}

namespace {

OptimizerSession make_session(const CampaignConfig& c, std::size_t run_index, std::unique_ptr<Optimizer> opt) {
    c.validate();
    auto space = std::shared_ptr<const ParameterSpace>(c.dataset, &c.dataset->space());
    if (!opt)
        opt = make_optimizer(c, run_index);
    return OptimizerSession(std::move(space), c.dataset->objectives(),
                            SessionConfig{c.budget, c.batch_size, derive_seed(c.base_seed, run_index)},
                            std::move(opt));
}

} // namespace

CampaignRun::CampaignRun(CampaignConfig config, std::size_t run_index, std::unique_ptr<Optimizer> optimizer)
    : config_(std::move(config)), session_(make_session(config_, run_index, std::move(optimizer))) {
    auto& t = trajectory_;
    t.run_id = make_run_id(config_, run_index);
    t.run_index = run_index;
    t.seed = derive_seed(config_.base_seed, run_index);
    t.status = RunStatus::running;
    t.method = config_.method.effective_label();
    t.modality = std::string(to_string(config_.method.modality));
    t.dataset = config_.dataset->name();
    t.space = config_.dataset->space();
    t.objectives = config_.dataset->objectives();
    t.policy = config_.policy();
    t.budget = config_.budget;
    t.batch_size = config_.batch_size;
    t.config = config_snapshot(config_);
}

const IterationRecord& CampaignRun::step(const std::string& author) {
    if (finished())
        throw SessionComplete();
    Suggestion s = session_.suggest();
    IterationRecord rec;
    rec.index = session_.iteration();
    rec.author = author.empty() ? trajectory_.method : author;
    rec.reasoning = s.reasoning;

    std::vector<ObservedResult> results;
    const auto policy = config_.policy();
    for (std::size_t i = 0; i < s.assignments.size(); ++i) {
        ObservedResult r{s.assignments[i], std::nullopt, s.validity[i]};
        if (r.validity == Validity::valid) {
            r.observation = config_.dataset->lookup(r.assignment);
            if (!r.observation)
                r.validity = Validity::off_table;
        }
        SuggestionRecord sr{r.assignment, r.validity, r.observation, std::nullopt};
        if (r.observation)
            sr.value = aggregate_group(*r.observation, policy);
        rec.suggestions.push_back(std::move(sr));
        results.push_back(std::move(r));
    }
    session_.observe(std::move(results));
    rec.timestamp = current_timestamp();
    trajectory_.iterations.push_back(std::move(rec));
    if (session_.complete())
        trajectory_.status = RunStatus::complete;
    return trajectory_.iterations.back();
}

void CampaignRun::mark_aborted(std::string reason) {
    trajectory_.status = RunStatus::aborted;
    trajectory_.abort_reason = std::move(reason);
}

void CampaignRun::run_to_completion() {
    try {
        while (!finished())
            step();
    } catch (const CampaignAbort& e) {
        mark_aborted(e.what());
    } catch (const NumericalError& e) {
        mark_aborted(std::string("numerical failure: ") + e.what());
    } catch (const SessionComplete&) {
        trajectory_.status = RunStatus::complete;
    }
}

Trajectory run_campaign(const CampaignConfig& config, std::size_t run_index) {
    CampaignRun run(config, run_index);
    run.run_to_completion();
    if (!config.output_dir.empty())
        write_trajectory(run.trajectory(), config.output_dir / (run.trajectory().run_id + ".json"));
    return run.trajectory();
}

std::vector<RunRequest> expand_repeats(const CampaignConfig& config) {
    std::vector<RunRequest> out;
    for (std::size_t r = 0; r < config.repeats; ++r)
        out.push_back({config, r});
    return out;
}

std::vector<Trajectory> run_suite(const std::vector<RunRequest>& requests, std::size_t parallelism) {
    for (const auto& r : requests)
        r.config.validate();
    std::vector<Trajectory> results(requests.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < requests.size(); i = next++) {
            const auto& req = requests[i];
            try {
                results[i] = run_campaign(req.config, req.run_index);
            } catch (const std::exception& e) {
                // Keep the suite alive; record what we can about the failed run.
                Trajectory t;
                t.run_id = make_run_id(req.config, req.run_index);
                t.run_index = req.run_index;
                t.seed = derive_seed(req.config.base_seed, req.run_index);
                t.status = RunStatus::aborted;
                t.abort_reason = e.what();
                t.method = req.config.method.effective_label();
                t.modality = std::string(to_string(req.config.method.modality));
                t.dataset = req.config.dataset->name();
                t.space = req.config.dataset->space();
                t.objectives = req.config.dataset->objectives();
                t.policy = req.config.policy();
                t.budget = req.config.budget;
                t.batch_size = req.config.batch_size;
                t.config = config_snapshot(req.config);
                results[i] = std::move(t);
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(parallelism, requests.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    return results;
}

} // namespace catbench::campaign
