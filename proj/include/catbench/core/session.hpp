#pragma once

#include "catbench/space/dataset.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace catbench {

inline constexpr std::size_t kDefaultBudget = 20;
inline constexpr std::size_t kDefaultBatchSize = 1;
inline constexpr std::size_t kDefaultRepeats = 20;

enum class Validity { valid, invalid_option, off_table };

std::string_view to_string(Validity v);
Validity validity_from_string(std::string_view s);

// The four structured reasoning elements shared by LLM and human suggestions.
// Random and BO leave them empty.
struct Reasoning {
    std::string analysis;
    std::string hypothesis;
    std::string rationale;
    std::string recommendation;

    bool empty() const { return analysis.empty() && hypothesis.empty() && rationale.empty() && recommendation.empty(); }
    friend bool operator==(const Reasoning&, const Reasoning&) = default;
};

struct Suggestion {
    std::vector<Assignment> assignments;
    // Parallel to assignments. Only invalid_option is ever set by an
    // optimizer; off_table is decided at lookup time.
    std::vector<Validity> validity;
    Reasoning reasoning;
};

struct ObservedResult {
    Assignment assignment;
    Observation observation; // std::nullopt = missing-marker
    Validity validity = Validity::valid;
};

struct HistoryEntry {
    std::size_t iteration = 0; // 1-based batch number
    Assignment assignment;
    Observation observation;
    Validity validity = Validity::valid;
};

struct SessionConfig {
    std::size_t budget = kDefaultBudget;
    std::size_t batch_size = kDefaultBatchSize;
    std::uint64_t seed = 0;
};

class OptimizerSession;

// A modality's policy. propose() is only ever called by the session.
class Optimizer {
public:
    virtual ~Optimizer() = default;
    virtual Suggestion propose(OptimizerSession& session, std::size_t count) = 0;
    virtual std::string label() const = 0;
};

// Campaign seed for repeat `index`: base ^ index.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept { return base ^ index; }

// Single-owner suggest/observe state machine with budget accounting.
class OptimizerSession {
public:
    OptimizerSession(std::shared_ptr<const ParameterSpace> space, std::vector<ObjectiveSpec> objectives,
                     SessionConfig config, std::unique_ptr<Optimizer> optimizer);

    // Throws SessionComplete when the budget is spent and ProtocolError when
    // the previous batch has not been observed.
    Suggestion suggest();

    // `results` must match the outstanding batch one-to-one, in order.
    // Missing-markers are recorded and consume budget like any suggestion.
    void observe(std::vector<ObservedResult> results);

    const ParameterSpace& space() const noexcept { return *space_; }
    const std::shared_ptr<const ParameterSpace>& space_ptr() const noexcept { return space_; }
    const std::vector<ObjectiveSpec>& objectives() const noexcept { return objectives_; }
    const SessionConfig& config() const noexcept { return config_; }
    std::span<const HistoryEntry> history() const noexcept { return history_; }
    std::size_t issued() const noexcept { return issued_; }
    std::size_t remaining() const noexcept { return config_.budget - issued_; }
    std::size_t iteration() const noexcept { return iteration_; }
    bool complete() const noexcept { return issued_ >= config_.budget && !awaiting_observation(); }
    bool awaiting_observation() const noexcept { return !outstanding_.empty(); }
    std::mt19937_64& rng() noexcept { return rng_; }
    Optimizer& optimizer() noexcept { return *optimizer_; }

    // Flat indices of every resolvable assignment suggested so far,
    // including the outstanding batch.
    const std::unordered_set<std::uint64_t>& suggested() const noexcept { return suggested_; }

private:
    std::shared_ptr<const ParameterSpace> space_;
    std::vector<ObjectiveSpec> objectives_;
    SessionConfig config_;
    std::unique_ptr<Optimizer> optimizer_;
    std::mt19937_64 rng_;
    std::vector<HistoryEntry> history_;
    std::vector<Assignment> outstanding_;
    std::unordered_set<std::uint64_t> suggested_;
    std::size_t issued_ = 0;
    std::size_t iteration_ = 0;
};

// History entry with the best aggregated scalar under the policy's goal
// direction; first occurrence wins ties.
struct BestResult {
    Assignment assignment;
    double value = 0.0;
    std::size_t position = 0; // 0-based index in history
};

std::optional<BestResult> best_so_far(std::span<const HistoryEntry> history, Goal goal,
                                      const AggregationPolicy& policy);
std::optional<BestResult> best_so_far(const OptimizerSession& session, const AggregationPolicy& policy);

} // namespace catbench
