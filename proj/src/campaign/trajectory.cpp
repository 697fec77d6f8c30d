#include "catbench/campaign/trajectory.hpp"

#include "catbench/llm/llm_optimizer.hpp"
#include "catbench/space/dataset_io.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <cstdio>

namespace catbench::campaign {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(RunStatus s) {
    switch (s) {
    case RunStatus::running: return "running";
    case RunStatus::complete: return "complete";
    case RunStatus::aborted: return "aborted";
    }
    return "running";
}

RunStatus run_status_from_string(std::string_view s) {
    if (s == "running")
        return RunStatus::running;
    if (s == "complete")
        return RunStatus::complete;
    if (s == "aborted")
        return RunStatus::aborted;
    throw ConfigError("unknown run status '" + std::string(s) + "'");
}

std::vector<const SuggestionRecord*> Trajectory::suggestions() const {
    std::vector<const SuggestionRecord*> out;
    for (const auto& it : iterations)
        for (const auto& s : it.suggestions)
            out.push_back(&s);
    return out;
}

std::vector<Assignment> Trajectory::assignments() const {
    std::vector<Assignment> out;
    for (const auto* s : suggestions())
        out.push_back(s->assignment);
    return out;
}

std::vector<Observation> Trajectory::observations() const {
    std::vector<Observation> out;
    for (const auto* s : suggestions())
        out.push_back(s->measurements);
    return out;
}

std::vector<std::optional<double>> Trajectory::values() const {
    std::vector<std::optional<double>> out;
    for (const auto* s : suggestions())
        out.push_back(s->value);
    return out;
}

std::size_t Trajectory::suggestion_count() const {
    std::size_t n = 0;
    for (const auto& it : iterations)
        n += it.suggestions.size();
    return n;
}

std::optional<std::pair<double, std::size_t>> Trajectory::best() const {
    std::optional<std::pair<double, std::size_t>> b;
    const auto v = values();
    const Goal g = goal();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] && (!b || better(*v[i], b->first, g)))
            b = {{*v[i], i}};
    return b;
}

std::string current_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

ordered_json to_json(const Trajectory& t) {
    ordered_json j;
    j["schema_version"] = t.schema_version;
    j["run_id"] = t.run_id;
    j["run_index"] = t.run_index;
    j["seed"] = t.seed;
    j["status"] = to_string(t.status);
    j["abort_reason"] = t.abort_reason;
    j["method"] = t.method;
    j["modality"] = t.modality;
    j["dataset"] = t.dataset;
    j["parameters"] = ordered_json::array();
    for (const auto& p : t.space.parameters())
        j["parameters"].push_back({{"name", p.name}, {"options", p.options}});
    j["objectives"] = ordered_json::array();
    for (const auto& o : t.objectives)
        j["objectives"].push_back({{"name", o.name}, {"goal", to_string(o.goal)}, {"tolerance", o.tolerance}});
    j["policy"] = {{"mode", to_string(t.policy.mode)}, {"selectivity", t.policy.selectivity}};
    j["budget"] = t.budget;
    j["batch_size"] = t.batch_size;
    j["config"] = t.config;
    j["iterations"] = ordered_json::array();
    for (const auto& it : t.iterations) {
        ordered_json r;
        r["index"] = it.index;
        r["timestamp"] = it.timestamp;
        r["author"] = it.author;
        r["reasoning"] = {{"analysis", it.reasoning.analysis},
                          {"hypothesis", it.reasoning.hypothesis},
                          {"rationale", it.reasoning.rationale},
                          {"recommendation", it.reasoning.recommendation}};
        r["suggestions"] = ordered_json::array();
        for (const auto& s : it.suggestions) {
            ordered_json sj;
            sj["assignment"] = s.assignment.labels;
            sj["validity"] = to_string(s.validity);
            sj["measurements"] = s.measurements ? ordered_json(*s.measurements) : ordered_json(nullptr);
            sj["value"] = s.value ? ordered_json(*s.value) : ordered_json(nullptr);
            r["suggestions"].push_back(std::move(sj));
        }
        j["iterations"].push_back(std::move(r));
    }
    return j;
}

Trajectory trajectory_from_json(const ordered_json& j) {
    Trajectory t;
    try {
        t.schema_version = j.at("schema_version").get<int>();
        if (t.schema_version != kTrajectorySchemaVersion)
            throw ConfigError("unsupported trajectory schema_version " + std::to_string(t.schema_version));
        t.run_id = j.at("run_id").get<std::string>();
        t.run_index = j.at("run_index").get<std::size_t>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.status = run_status_from_string(j.at("status").get<std::string>());
        t.abort_reason = j.value("abort_reason", std::string{});
        t.method = j.at("method").get<std::string>();
        t.modality = j.at("modality").get<std::string>();
        t.dataset = j.at("dataset").get<std::string>();
        std::vector<Parameter> params;
        for (const auto& p : j.at("parameters"))
            params.push_back({p.at("name").get<std::string>(), p.at("options").get<std::vector<std::string>>()});
        t.space = ParameterSpace(std::move(params));
        for (const auto& o : j.at("objectives"))
            t.objectives.push_back({o.at("name").get<std::string>(), goal_from_string(o.at("goal").get<std::string>()),
                                    o.value("tolerance", kDefaultRelativeTolerance)});
        t.policy.mode = aggregation_mode_from_string(j.at("policy").at("mode").get<std::string>());
        t.policy.selectivity = j.at("policy").at("selectivity").get<bool>();
        t.budget = j.at("budget").get<std::size_t>();
        t.batch_size = j.at("batch_size").get<std::size_t>();
        t.config = j.at("config");
        for (const auto& r : j.at("iterations")) {
            IterationRecord it;
            it.index = r.at("index").get<std::size_t>();
            it.timestamp = r.at("timestamp").get<std::string>();
            it.author = r.value("author", std::string{});
            const auto& re = r.at("reasoning");
            it.reasoning = {re.value("analysis", std::string{}), re.value("hypothesis", std::string{}),
                            re.value("rationale", std::string{}), re.value("recommendation", std::string{})};
            for (const auto& sj : r.at("suggestions")) {
                SuggestionRecord s;
                s.assignment.labels = sj.at("assignment").get<std::vector<std::string>>();
                s.validity = validity_from_string(sj.at("validity").get<std::string>());
                if (!sj.at("measurements").is_null())
                    s.measurements = sj.at("measurements").get<std::vector<MeasurementVector>>();
                if (!sj.at("value").is_null())
                    s.value = sj.at("value").get<double>();
                it.suggestions.push_back(std::move(s));
            }
            t.iterations.push_back(std::move(it));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed trajectory: ") + e.what());
    }
    return t;
}

std::string serialize_trajectory(const Trajectory& t) { return to_json(t).dump(1) + "\n"; }

Trajectory parse_trajectory(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw ConfigError(std::string("trajectory is not JSON: ") + e.what());
    }
    return trajectory_from_json(j);
}

void write_trajectory(const Trajectory& t, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    write_text_file_atomic(path, serialize_trajectory(t));
}

Trajectory read_trajectory(const std::filesystem::path& path) { return parse_trajectory(read_text_file(path)); }

std::vector<Trajectory> read_trajectories(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Trajectory> out;
    for (const auto& f : files)
        out.push_back(read_trajectory(f));
    return out;
}

std::size_t count_duplicates(const Trajectory& t) {
    const auto a = t.assignments();
    return llm::count_duplicates(a);
}

double invalid_rate(const Trajectory& t) {
    const auto o = t.observations();
    return llm::invalid_rate(o);
}

} // namespace catbench::campaign
