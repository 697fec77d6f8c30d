#pragma once

#include "catbench/kernels/execution.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace catbench::kernels {

// GP inputs are plain vectors: option indices (as doubles) for the Hamming
// kernel, standardized descriptor features for Matern-5/2.
using GPInput = std::vector<double>;

enum class KernelKind { hamming_ard, matern52_ard };

struct KernelParams {
    KernelKind kind = KernelKind::hamming_ard;
    std::vector<double> lengthscales; // one per input dimension
    double signal_variance = 1.0;
};

// Hamming-ARD: s2 * exp(-(1/K) * sum_i [a_i != b_i] / l_i).
// Matern-5/2 ARD: s2 * (1 + sqrt5 r + 5 r^2 / 3) * exp(-sqrt5 r), r^2 = sum ((a_i - b_i) / l_i)^2.
double kernel_value(const KernelParams& k, std::span<const double> a, std::span<const double> b);

Eigen::MatrixXd gram_matrix(const KernelParams& k, const std::vector<GPInput>& inputs);

struct PosteriorBatch {
    std::vector<double> mean;
    std::vector<double> variance; // latent function variance, clamped at 0
};

// Posterior over `candidates` given the Cholesky factor `lower` of the
// training covariance (noise included) and alpha = K^{-1} y.
//   parallel: one candidate per OpenMP iteration (cross-kernel row, forward
//             substitution, dot products).
//   serial:   reference route; whole cross-kernel matrix and one blocked
//             triangular solve through Eigen.
PosteriorBatch posterior_batch(const KernelParams& k, const std::vector<GPInput>& training,
                               const Eigen::MatrixXd& lower, const Eigen::VectorXd& alpha,
                               const std::vector<GPInput>& candidates, Execution exec);

} // namespace catbench::kernels
