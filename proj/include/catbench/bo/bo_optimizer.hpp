#pragma once

#include "catbench/bo/acquisition.hpp"
#include "catbench/bo/featurization.hpp"
#include "catbench/bo/gp.hpp"
#include "catbench/core/session.hpp"
#include "catbench/kernels/execution.hpp"

#include <optional>
#include <vector>

namespace catbench::bo {

inline constexpr std::size_t kDefaultInitialPoints = 1;

struct BOConfig {
    FeaturizationMode featurization = FeaturizationMode::one_hot;
    AcquisitionKind acquisition = AcquisitionKind::ei;
    double ucb_beta = kDefaultUcbBeta;
    // Per-objective Chimera tolerances; empty means use the objective specs.
    std::vector<double> tolerances;
    std::size_t initial_points = kDefaultInitialPoints;
    std::size_t restarts = 8;
    // One table per parameter, descriptors mode only.
    std::vector<DescriptorTable> descriptors;
    // Mode used for incumbent bookkeeping; replicates always enter the GP individually.
    AggregationMode aggregation = AggregationMode::lower_bound;
    kernels::Execution exec = kernels::Execution::parallel;
};

// GP-based categorical BO. Batch size must be 1. Candidates are every
// assignment not yet suggested; the acquisition argmax wins, ties broken
// uniformly with the session generator.
class BayesianOptimizer final : public Optimizer {
public:
    explicit BayesianOptimizer(BOConfig config);

    Suggestion propose(OptimizerSession& session, std::size_t count) override;
    std::string label() const override;

    const BOConfig& config() const noexcept { return config_; }

    // Diagnostics from the last model-guided proposal.
    struct Step {
        std::vector<std::uint64_t> candidates; // flat indices
        std::vector<double> acquisition;       // parallel to candidates
        double incumbent = 0.0;
        bool random = false;
    };
    const Step& last_step() const noexcept { return last_; }

private:
    std::uint64_t choose(OptimizerSession& session);

    BOConfig config_;
    std::optional<Featurization> featurization_;
    Step last_;
};

} // namespace catbench::bo
