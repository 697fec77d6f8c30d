#pragma once

#include "catbench/core/session.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace catbench::campaign {

inline constexpr int kTrajectorySchemaVersion = 1;

enum class RunStatus { running, complete, aborted };

std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

struct SuggestionRecord {
    Assignment assignment;
    Validity validity = Validity::valid;
    Observation measurements;    // all replicates, or the missing-marker
    std::optional<double> value; // aggregated scalar, absent for the missing-marker

    friend bool operator==(const SuggestionRecord&, const SuggestionRecord&) = default;
};

struct IterationRecord {
    std::size_t index = 0; // 1-based, contiguous
    std::string timestamp; // ISO-8601 UTC with milliseconds
    std::string author;
    Reasoning reasoning;
    std::vector<SuggestionRecord> suggestions;

    friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

// One self-describing campaign run.
struct Trajectory {
    int schema_version = kTrajectorySchemaVersion;
    std::string run_id;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::running;
    std::string abort_reason;
    std::string method;
    std::string modality;
    std::string dataset;
    ParameterSpace space;
    std::vector<ObjectiveSpec> objectives;
    AggregationPolicy policy;
    std::size_t budget = kDefaultBudget;
    std::size_t batch_size = kDefaultBatchSize;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<IterationRecord> iterations;

    // Direction of the aggregated value.
    Goal goal() const { return policy.selectivity ? Goal::maximize : objectives.at(0).goal; }
    std::vector<const SuggestionRecord*> suggestions() const;
    std::vector<Assignment> assignments() const;
    std::vector<Observation> observations() const;
    // Aggregated value per suggestion, in order (nullopt = missing-marker).
    std::vector<std::optional<double>> values() const;
    std::size_t suggestion_count() const;
    // Best aggregated value and its 0-based suggestion position.
    std::optional<std::pair<double, std::size_t>> best() const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

std::string current_timestamp();

nlohmann::ordered_json to_json(const Trajectory& t);
Trajectory trajectory_from_json(const nlohmann::ordered_json& j);

std::string serialize_trajectory(const Trajectory& t);
Trajectory parse_trajectory(std::string_view text);

void write_trajectory(const Trajectory& t, const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path);
// Every *.json file in `dir`, sorted by file name.
std::vector<Trajectory> read_trajectories(const std::filesystem::path& dir);

std::size_t count_duplicates(const Trajectory& t);
double invalid_rate(const Trajectory& t);

} // namespace catbench::campaign
