#pragma once

#include "catbench/bo/bo_optimizer.hpp"
#include "catbench/campaign/trajectory.hpp"
#include "catbench/llm/llm_optimizer.hpp"
#include "catbench/space/dataset.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace catbench::campaign {

enum class Modality { random, bo, llm, human };

std::string_view to_string(Modality m);
Modality modality_from_string(std::string_view s);

struct MethodSpec {
    Modality modality = Modality::random;
    std::string label; // empty: derived from the modality and its settings

    bo::BOConfig bo;

    // LLM: "mock" replays `mock_script`; "http" talks to provider_config.endpoint.
    std::string provider = "mock";
    nlohmann::json mock_script;
    llm::LLMProviderConfig provider_config;
    std::vector<std::string> context_documents;
    // Overrides `provider` when set; called once per run.
    std::function<std::shared_ptr<llm::Provider>(std::size_t run_index)> provider_factory;

    std::string effective_label() const;
};

struct CampaignConfig {
    std::shared_ptr<const BenchmarkDataset> dataset;
    std::string dataset_ref; // where the dataset came from, for the snapshot
    MethodSpec method;
    std::size_t budget = kDefaultBudget;
    std::size_t batch_size = kDefaultBatchSize;
    std::size_t repeats = kDefaultRepeats;
    std::uint64_t base_seed = 0;
    AggregationMode aggregation = AggregationMode::lower_bound;
    std::filesystem::path output_dir; // empty: nothing written

    AggregationPolicy policy() const { return dataset->default_policy(aggregation); }
    // Throws ConfigError.
    void validate() const;
};

nlohmann::ordered_json config_snapshot(const CampaignConfig& config);
std::string make_run_id(const CampaignConfig& config, std::size_t run_index);
std::unique_ptr<Optimizer> make_optimizer(const CampaignConfig& config, std::size_t run_index);

// One campaign: suggest -> lookup -> observe until the budget is spent.
class CampaignRun {
public:
    CampaignRun(CampaignConfig config, std::size_t run_index, std::unique_ptr<Optimizer> optimizer = nullptr);

    // One iteration. Throws SessionComplete when the budget is spent and lets
    // CampaignAbort through with the trajectory untouched.
    const IterationRecord& step(const std::string& author = {});

    // Steps until done; provider aborts and numerical failures mark the run aborted.
    void run_to_completion();
    void mark_aborted(std::string reason);

    const Trajectory& trajectory() const noexcept { return trajectory_; }
    // For callers that rename runs or restore recorded timestamps after a replay.
    Trajectory& mutable_trajectory() noexcept { return trajectory_; }
    const CampaignConfig& config() const noexcept { return config_; }
    OptimizerSession& session() noexcept { return session_; }
    const OptimizerSession& session() const noexcept { return session_; }
    bool finished() const noexcept { return trajectory_.status != RunStatus::running; }

private:
    CampaignConfig config_;
    OptimizerSession session_;
    Trajectory trajectory_;
};

// Runs one repeat and writes it to config.output_dir when set.
Trajectory run_campaign(const CampaignConfig& config, std::size_t run_index = 0);

struct RunRequest {
    CampaignConfig config;
    std::size_t run_index = 0;
};

std::vector<RunRequest> expand_repeats(const CampaignConfig& config);

// Bounded worker pool; results follow request order.
std::vector<Trajectory> run_suite(const std::vector<RunRequest>& requests, std::size_t parallelism);

} // namespace catbench::campaign
