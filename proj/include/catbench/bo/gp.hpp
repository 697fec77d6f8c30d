#pragma once

#include "catbench/kernels/posterior.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace catbench::bo {

using kernels::GPInput;
using kernels::KernelKind;

struct GPHyperparameters {
    std::vector<double> lengthscales;
    double signal_variance = 1.0;
    double noise_variance = 1e-4;
};

// Box bounds for the log-space hyperparameter search.
struct GPBounds {
    double lengthscale_min = 0.05, lengthscale_max = 20.0;
    double signal_min = 0.1, signal_max = 10.0;
    double noise_min = 1e-6, noise_max = 1.0;
};

struct GPFitOptions {
    std::size_t restarts = 8;
    std::size_t max_evaluations = 600; // per restart
    GPBounds bounds{};
    std::uint64_t seed = 0;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

// Zero-mean GP on standardized targets. Immutable once built.
class GPModel {
public:
    // Multi-start compass search on the log marginal likelihood.
    static GPModel fit(KernelKind kind, std::vector<GPInput> inputs, std::vector<double> targets,
                       const GPFitOptions& options = {});

    static GPModel with_hyperparameters(KernelKind kind, std::vector<GPInput> inputs, std::vector<double> targets,
                                        GPHyperparameters hp, const GPBounds& bounds = {});

    // Standardized-target scale.
    Prediction predict(const GPInput& x) const;
    kernels::PosteriorBatch predict_batch(const std::vector<GPInput>& candidates,
                                          kernels::Execution exec = kernels::Execution::parallel) const;

    // Raw target scale.
    Prediction predict_raw(const GPInput& x) const;

    double standardize(double raw) const { return (raw - y_mean_) / y_scale_; }
    double unstandardize(double z) const { return z * y_scale_ + y_mean_; }
    double target_scale() const noexcept { return y_scale_; }

    double log_marginal_likelihood() const noexcept { return lml_; }
    const GPHyperparameters& hyperparameters() const noexcept { return hp_; }
    const kernels::KernelParams& kernel() const noexcept { return kernel_; }
    std::size_t size() const noexcept { return inputs_.size(); }
    double jitter() const noexcept { return jitter_; }

private:
    GPModel() = default;
    void factorize(); // throws NumericalError after jitter escalation

    std::vector<GPInput> inputs_;
    Eigen::VectorXd y_;
    double y_mean_ = 0.0, y_scale_ = 1.0;
    GPHyperparameters hp_;
    kernels::KernelParams kernel_;
    Eigen::MatrixXd lower_;
    Eigen::VectorXd alpha_;
    double lml_ = 0.0;
    double jitter_ = 0.0;
};

} // namespace catbench::bo
