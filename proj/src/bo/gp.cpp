#include "catbench/bo/gp.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace catbench::bo {

namespace {

constexpr std::array<double, 6> kJitterLadder{0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};

struct LogBox {
    std::vector<double> lo, hi;
};

LogBox log_box(std::size_t dims, const GPBounds& b) {
    LogBox box;
    for (std::size_t i = 0; i < dims; ++i) {
        box.lo.push_back(std::log(b.lengthscale_min));
        box.hi.push_back(std::log(b.lengthscale_max));
    }
    box.lo.push_back(std::log(b.signal_min));
    box.hi.push_back(std::log(b.signal_max));
    box.lo.push_back(std::log(b.noise_min));
    box.hi.push_back(std::log(b.noise_max));
    return box;
}

GPHyperparameters unpack(const std::vector<double>& theta, std::size_t dims) {
    GPHyperparameters hp;
    for (std::size_t i = 0; i < dims; ++i)
        hp.lengthscales.push_back(std::exp(theta[i]));
    hp.signal_variance = std::exp(theta[dims]);
    hp.noise_variance = std::exp(theta[dims + 1]);
    return hp;
}

} // namespace

GPModel GPModel::with_hyperparameters(KernelKind kind, std::vector<GPInput> inputs, std::vector<double> targets,
                                      GPHyperparameters hp, const GPBounds&) {
    if (inputs.empty() || inputs.size() != targets.size())
        throw NumericalError("GP needs at least one training pair and one target per input");
    const std::size_t dims = inputs.front().size();
    for (const auto& x : inputs)
        if (x.size() != dims)
            throw NumericalError("GP inputs have inconsistent dimension");
    if (hp.lengthscales.size() != dims)
        throw NumericalError("GP needs one lengthscale per input dimension");

    GPModel m;
    m.inputs_ = std::move(inputs);
    const double n = static_cast<double>(targets.size());
    m.y_mean_ = std::accumulate(targets.begin(), targets.end(), 0.0) / n;
    double var = 0.0;
    for (double t : targets)
        var += (t - m.y_mean_) * (t - m.y_mean_);
    var /= n;
    // constant targets keep unit scale
    m.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
    m.y_.resize(static_cast<Eigen::Index>(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i)
        m.y_(static_cast<Eigen::Index>(i)) = (targets[i] - m.y_mean_) / m.y_scale_;
    m.hp_ = std::move(hp);
    m.kernel_ = {kind, m.hp_.lengthscales, m.hp_.signal_variance};
    m.factorize();
    return m;
}

void GPModel::factorize() {
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    const Eigen::MatrixXd gram = kernels::gram_matrix(kernel_, inputs_);
    for (double jitter : kJitterLadder) {
        Eigen::MatrixXd k = gram;
        k.diagonal().array() += hp_.noise_variance + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(k);
        if (llt.info() != Eigen::Success)
            continue;
        Eigen::MatrixXd lower = llt.matrixL();
        if (!(lower.diagonal().array() > 0.0).all() || !lower.allFinite())
            continue;
        lower_ = std::move(lower);
        alpha_ = llt.solve(y_);
        jitter_ = jitter;
        lml_ = -0.5 * y_.dot(alpha_) - lower_.diagonal().array().log().sum() -
               0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
        return;
    }
    std::ostringstream msg;
    msg << "Cholesky failed after jitter escalation to " << kJitterLadder.back() << " (n=" << n
        << ", signal variance=" << hp_.signal_variance << ", noise variance=" << hp_.noise_variance << ")";
    throw NumericalError(msg.str());
}

GPModel GPModel::fit(KernelKind kind, std::vector<GPInput> inputs, std::vector<double> targets,
                     const GPFitOptions& options) {
    if (inputs.empty())
        throw NumericalError("GP needs at least one training pair");
    const std::size_t dims = inputs.front().size();
    const LogBox box = log_box(dims, options.bounds);
    const std::size_t p = box.lo.size();

    auto objective = [&](const std::vector<double>& theta) {
        try {
            return with_hyperparameters(kind, inputs, targets, unpack(theta, dims)).log_marginal_likelihood();
        } catch (const NumericalError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    std::mt19937_64 rng(options.seed);
    std::vector<double> best_theta;
    double best = -std::numeric_limits<double>::infinity();

    for (std::size_t start = 0; start < std::max<std::size_t>(1, options.restarts); ++start) {
        std::vector<double> theta(p);
        if (start == 0) {
            for (std::size_t i = 0; i < dims; ++i)
                theta[i] = 0.0;
            theta[dims] = 0.0;
            theta[dims + 1] = std::log(1e-3);
        } else {
            for (std::size_t i = 0; i < p; ++i)
                theta[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
        }
        for (std::size_t i = 0; i < p; ++i)
            theta[i] = std::clamp(theta[i], box.lo[i], box.hi[i]);

        double value = objective(theta);
        std::size_t evals = 1;
        double step = 1.0;
        while (step > 1e-3 && evals < options.max_evaluations) {
            bool improved = false;
            for (std::size_t i = 0; i < p && evals < options.max_evaluations; ++i) {
                for (double dir : {1.0, -1.0}) {
                    auto trial = theta;
                    trial[i] = std::clamp(theta[i] + dir * step, box.lo[i], box.hi[i]);
                    if (trial[i] == theta[i])
                        continue;
                    const double v = objective(trial);
                    ++evals;
                    if (v > value) {
                        theta = std::move(trial);
                        value = v;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved)
                step *= 0.5;
        }
        if (value > best || best_theta.empty()) {
            best = value;
            best_theta = theta;
        }
    }
    if (!std::isfinite(best))
        throw NumericalError("GP hyperparameter search found no factorizable configuration");
    return with_hyperparameters(kind, std::move(inputs), std::move(targets), unpack(best_theta, dims), options.bounds);
}

Prediction GPModel::predict(const GPInput& x) const {
    auto batch = predict_batch({x}, kernels::Execution::serial);
    return {batch.mean.front(), batch.variance.front()};
}

kernels::PosteriorBatch GPModel::predict_batch(const std::vector<GPInput>& candidates, kernels::Execution exec) const {
    return kernels::posterior_batch(kernel_, inputs_, lower_, alpha_, candidates, exec);
}

Prediction GPModel::predict_raw(const GPInput& x) const {
    const auto p = predict(x);
    return {unstandardize(p.mean), p.variance * y_scale_ * y_scale_};
}

} // namespace catbench::bo
