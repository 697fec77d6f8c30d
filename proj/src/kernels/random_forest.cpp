#include "catbench/kernels/random_forest.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include <omp.h>

namespace catbench::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace {

struct Frame {
    std::int32_t node;
    std::size_t begin;
    std::size_t end;
};

struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double proxy = -1.0;
    std::size_t n_left = 0;
    double sum_left = 0.0, sq_left = 0.0;
};

} // namespace

void RegressionTree::fit(const FeatureMatrix& x, std::span<const double> y, std::vector<std::size_t> samples,
                         std::size_t max_features, std::uint64_t seed) {
    nodes_.clear();
    importance_.assign(x.cols, 0.0);
    if (samples.empty())
        throw DomainError("cannot fit a tree on zero samples");
    max_features = std::clamp<std::size_t>(max_features, 1, x.cols);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(x.cols);
    std::vector<std::pair<double, double>> column; // (feature value, target)
    const double n_total = static_cast<double>(samples.size());

    nodes_.push_back({});
    std::vector<Frame> stack{{0, 0, samples.size()}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const std::size_t n = f.end - f.begin;

        double sum = 0.0, sq = 0.0;
        double lo = y[samples[f.begin]], hi = lo;
        for (std::size_t i = f.begin; i < f.end; ++i) {
            const double v = y[samples[i]];
            sum += v;
            sq += v * v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double mean = sum / static_cast<double>(n);
        nodes_[f.node].value = mean;
        if (n < 2 || lo == hi)
            continue;
        const double impurity = std::max(0.0, sq / static_cast<double>(n) - mean * mean);

        std::iota(order.begin(), order.end(), std::size_t{0});
        Split best;
        std::size_t visited = 0;
        for (std::size_t k = 0; k < order.size() && visited < max_features; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
            std::swap(order[k], order[pick(rng)]);
            const std::size_t feat = order[k];

            column.clear();
            for (std::size_t i = f.begin; i < f.end; ++i)
                column.emplace_back(x(samples[i], feat), y[samples[i]]);
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (column.front().first == column.back().first)
                continue; // constant here; does not count toward max_features
            ++visited;

            double sl = 0.0, ql = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                sl += column[i - 1].second;
                ql += column[i - 1].second * column[i - 1].second;
                if (column[i - 1].first == column[i].first)
                    continue;
                const double nl = static_cast<double>(i), nr = static_cast<double>(n - i);
                const double sr = sum - sl;
                const double proxy = sl * sl / nl + sr * sr / nr;
                if (proxy > best.proxy) {
                    best = {static_cast<std::int32_t>(feat), 0.5 * (column[i - 1].first + column[i].first), proxy, i,
                            sl, ql};
                }
            }
        }
        if (best.feature < 0)
            continue;

        const double nl = static_cast<double>(best.n_left), nr = static_cast<double>(n - best.n_left);
        const double ml = best.sum_left / nl, mr = (sum - best.sum_left) / nr;
        const double imp_l = std::max(0.0, best.sq_left / nl - ml * ml);
        const double imp_r = std::max(0.0, (sq - best.sq_left) / nr - mr * mr);
        importance_[static_cast<std::size_t>(best.feature)] +=
            (static_cast<double>(n) * impurity - nl * imp_l - nr * imp_r) / n_total;

        const auto mid = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(f.begin),
                                        samples.begin() + static_cast<std::ptrdiff_t>(f.end),
                                        [&](std::size_t s) { return x(s, best.feature) <= best.threshold; });
        const std::size_t split = static_cast<std::size_t>(mid - samples.begin());

        const auto left = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({});
        const auto right = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({});
        auto& node = nodes_[f.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        stack.push_back({right, split, f.end});
        stack.push_back({left, f.begin, split});
    }
}

double RegressionTree::predict(std::span<const double> row) const {
    std::int32_t i = 0;
    while (nodes_[i].feature >= 0)
        i = row[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
    return nodes_[i].value;
}

void RandomForestRegressor::fit(const FeatureMatrix& x, std::span<const double> y, Execution exec) {
    if (x.rows == 0 || x.cols == 0 || y.size() != x.rows)
        throw DomainError("random forest needs a non-empty matrix with one target per row");
    n_features_ = x.cols;
    const std::size_t max_features =
        config_.max_features ? config_.max_features
                             : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols))));
    trees_.assign(config_.n_trees, RegressionTree{});

    const auto n_trees = static_cast<std::int64_t>(config_.n_trees);
    const bool parallel = exec == Execution::parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t t = 0; t < n_trees; ++t) {
        const std::uint64_t tree_seed = mix_seed(config_.seed ^ mix_seed(static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> samples(x.rows);
        if (config_.bootstrap) {
            std::mt19937_64 rng(tree_seed);
            std::uniform_int_distribution<std::size_t> draw(0, x.rows - 1);
            for (auto& s : samples)
                s = draw(rng);
        } else {
            std::iota(samples.begin(), samples.end(), std::size_t{0});
        }
        trees_[static_cast<std::size_t>(t)].fit(x, y, std::move(samples), max_features, mix_seed(tree_seed));
    }
}

double RandomForestRegressor::predict(std::span<const double> row) const {
    if (trees_.empty())
        throw DomainError("forest is not fitted");
    double s = 0.0;
    for (const auto& t : trees_)
        s += t.predict(row);
    return s / static_cast<double>(trees_.size());
}

std::vector<double> RandomForestRegressor::feature_importances() const {
    std::vector<double> total(n_features_, 0.0);
    std::size_t used = 0;
    for (const auto& t : trees_) {
        if (t.nodes().size() <= 1)
            continue;
        ++used;
        const auto& imp = t.impurity_decrease();
        const double s = std::accumulate(imp.begin(), imp.end(), 0.0);
        if (s > 0.0)
            for (std::size_t f = 0; f < n_features_; ++f)
                total[f] += imp[f] / s;
    }
    if (used == 0)
        return total;
    const double s = std::accumulate(total.begin(), total.end(), 0.0);
    if (s > 0.0)
        for (auto& v : total)
            v /= s;
    return total;
}

} // namespace catbench::kernels
