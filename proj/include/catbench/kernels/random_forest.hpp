#pragma once

#include "catbench/kernels/execution.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace catbench::kernels {

// Dense row-major feature matrix.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

struct ForestConfig {
    std::size_t n_trees = 200;
    // 0 selects floor(sqrt(cols)), at least 1.
    std::size_t max_features = 0;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// CART regression tree, mean-squared-error criterion, grown to purity.
class RegressionTree {
public:
    struct Node {
        std::int32_t feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };

    // `importance` receives the weighted impurity decrease per feature,
    // unnormalized, scaled by the number of training samples.
    void fit(const FeatureMatrix& x, std::span<const double> y, std::vector<std::size_t> samples,
             std::size_t max_features, std::uint64_t seed);

    double predict(std::span<const double> row) const;
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& impurity_decrease() const noexcept { return importance_; }

private:
    std::vector<Node> nodes_;
    std::vector<double> importance_;
};

class RandomForestRegressor {
public:
    explicit RandomForestRegressor(ForestConfig config = {}) : config_(config) {}

    // Trees are seeded from (config.seed, tree index), so the fitted forest
    // is identical for both execution routes and any thread count.
    void fit(const FeatureMatrix& x, std::span<const double> y, Execution exec = Execution::parallel);

    double predict(std::span<const double> row) const;

    // Impurity-based importances: each tree's decreases normalized to sum 1,
    // averaged over trees that split at least once, then renormalized. All
    // zeros when no tree ever split.
    std::vector<double> feature_importances() const;

    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

private:
    ForestConfig config_;
    std::size_t n_features_ = 0;
    std::vector<RegressionTree> trees_;
};

} // namespace catbench::kernels
