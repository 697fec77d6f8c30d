#include "catbench/kernels/posterior.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace catbench::kernels {

double kernel_value(const KernelParams& k, std::span<const double> a, std::span<const double> b) {
    const std::size_t d = a.size();
    if (k.kind == KernelKind::hamming_ard) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            if (a[i] != b[i])
                s += 1.0 / k.lengthscales[i];
        return k.signal_variance * std::exp(-s / static_cast<double>(d));
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double z = (a[i] - b[i]) / k.lengthscales[i];
        r2 += z * z;
    }
    const double r = std::sqrt(5.0 * r2);
    return k.signal_variance * (1.0 + r + r * r / 3.0) * std::exp(-r);
}

Eigen::MatrixXd gram_matrix(const KernelParams& k, const std::vector<GPInput>& inputs) {
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        g(i, i) = kernel_value(k, inputs[i], inputs[i]);
        for (Eigen::Index j = 0; j < i; ++j)
            g(i, j) = g(j, i) = kernel_value(k, inputs[i], inputs[j]);
    }
    return g;
}

namespace {

PosteriorBatch posterior_serial(const KernelParams& k, const std::vector<GPInput>& training,
                                const Eigen::MatrixXd& lower, const Eigen::VectorXd& alpha,
                                const std::vector<GPInput>& candidates) {
    const auto n = static_cast<Eigen::Index>(training.size());
    const auto m = static_cast<Eigen::Index>(candidates.size());
    Eigen::MatrixXd cross(n, m);
    Eigen::VectorXd prior(m);
    for (Eigen::Index c = 0; c < m; ++c) {
        prior(c) = kernel_value(k, candidates[c], candidates[c]);
        for (Eigen::Index i = 0; i < n; ++i)
            cross(i, c) = kernel_value(k, training[i], candidates[c]);
    }
    const Eigen::VectorXd mean = cross.transpose() * alpha;
    const Eigen::MatrixXd v = lower.triangularView<Eigen::Lower>().solve(cross);
    const Eigen::VectorXd var = prior - v.colwise().squaredNorm().transpose();

    PosteriorBatch out;
    out.mean.assign(mean.data(), mean.data() + m);
    out.variance.resize(static_cast<std::size_t>(m));
    for (Eigen::Index c = 0; c < m; ++c)
        out.variance[static_cast<std::size_t>(c)] = std::max(0.0, var(c));
    return out;
}

PosteriorBatch posterior_parallel(const KernelParams& k, const std::vector<GPInput>& training,
                                  const Eigen::MatrixXd& lower, const Eigen::VectorXd& alpha,
                                  const std::vector<GPInput>& candidates) {
    const std::size_t n = training.size();
    const auto m = static_cast<std::int64_t>(candidates.size());
    PosteriorBatch out;
    out.mean.resize(candidates.size());
    out.variance.resize(candidates.size());
    const double* l = lower.data(); // column-major
    const auto ld = static_cast<std::size_t>(lower.rows());

#pragma omp parallel
    {
        std::vector<double> ks(n), v(n);
#pragma omp for schedule(static)
        for (std::int64_t c = 0; c < m; ++c) {
            const auto& x = candidates[static_cast<std::size_t>(c)];
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ks[i] = kernel_value(k, training[i], x);
                mean += ks[i] * alpha[static_cast<Eigen::Index>(i)];
            }
            double vv = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double s = ks[i];
                for (std::size_t j = 0; j < i; ++j)
                    s -= l[j * ld + i] * v[j];
                v[i] = s / l[i * ld + i];
                vv += v[i] * v[i];
            }
            out.mean[static_cast<std::size_t>(c)] = mean;
            out.variance[static_cast<std::size_t>(c)] = std::max(0.0, kernel_value(k, x, x) - vv);
        }
    }
    return out;
}

} // namespace

PosteriorBatch posterior_batch(const KernelParams& k, const std::vector<GPInput>& training,
                               const Eigen::MatrixXd& lower, const Eigen::VectorXd& alpha,
                               const std::vector<GPInput>& candidates, Execution exec) {
    if (lower.rows() != static_cast<Eigen::Index>(training.size()) ||
        alpha.size() != static_cast<Eigen::Index>(training.size()))
        throw NumericalError("posterior: factor and training set sizes disagree");
    if (candidates.empty())
        return {};
    return exec == Execution::parallel ? posterior_parallel(k, training, lower, alpha, candidates)
                                       : posterior_serial(k, training, lower, alpha, candidates);
}

} // namespace catbench::kernels
