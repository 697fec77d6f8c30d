#include "catbench/complexity/complexity.hpp"

#include "catbench/error.hpp"
#include "catbench/kernels/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace catbench::complexity {

double skewness(std::span<const double> values) {
    if (values.size() < 2)
        throw DomainError("skewness needs at least 2 values");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (!(m2 > 1e-300))
        throw DomainError("skewness is undefined for zero-variance data");
    return m3 / std::pow(m2, 1.5);
}

double scarcity_index(std::span<const double> values) {
    if (values.empty())
        throw DomainError("scarcity index needs at least one value");
    const double threshold = 0.95 * *std::max_element(values.begin(), values.end());
    const auto above = std::count_if(values.begin(), values.end(), [&](double v) { return v > threshold; });
    return 1.0 - static_cast<double>(above) / static_cast<double>(values.size());
}

std::vector<double> parameter_importances(const BenchmarkDataset& dataset, const AggregationPolicy& policy,
                                          std::uint64_t seed, kernels::Execution exec) {
    const auto& space = dataset.space();
    std::vector<std::size_t> offset(space.dimension() + 1, 0);
    for (std::size_t i = 0; i < space.dimension(); ++i)
        offset[i + 1] = offset[i] + space.option_count(i);

    kernels::FeatureMatrix x(dataset.table().size(), offset.back());
    std::vector<double> y;
    y.reserve(x.rows);
    std::size_t r = 0;
    for (const auto& [flat, group] : dataset.table()) {
        const auto idx = space.unflatten(flat);
        for (std::size_t i = 0; i < idx.size(); ++i)
            x(r, offset[i] + idx[i]) = 1.0;
        y.push_back(aggregate_group(group, policy));
        ++r;
    }

    kernels::RandomForestRegressor forest({.n_trees = kForestTrees, .max_features = 0, .bootstrap = true, .seed = seed});
    forest.fit(x, y, exec);
    const auto columns = forest.feature_importances();

    std::vector<double> per_param(space.dimension(), 0.0);
    for (std::size_t i = 0; i < space.dimension(); ++i)
        for (std::size_t c = offset[i]; c < offset[i + 1]; ++c)
            per_param[i] += columns[c];
    const double s = std::accumulate(per_param.begin(), per_param.end(), 0.0);
    if (s > 0.0)
        for (auto& v : per_param)
            v /= s;
    return per_param;
}

double parameter_importance_balance(const BenchmarkDataset& dataset, const AggregationPolicy& policy,
                                    std::uint64_t seed) {
    if (dataset.space().dimension() < 2)
        return 1.0;
    const auto imp = parameter_importances(dataset, policy, seed);
    if (std::all_of(imp.begin(), imp.end(), [](double v) { return v == 0.0; }))
        return 1.0;
    const double n = static_cast<double>(imp.size());
    const double mean = std::accumulate(imp.begin(), imp.end(), 0.0) / n;
    double var = 0.0;
    for (double v : imp)
        var += (v - mean) * (v - mean);
    return 1.0 - std::sqrt(var / n);
}

double radar_area(const MetricVector& v) {
    double s = 0.0;
    for (std::size_t j = 0; j < kMetricCount; ++j)
        s += v[j] * v[(j + 1) % kMetricCount];
    return 0.5 * std::sin(std::numbers::pi / 3.0) * s;
}

ComplexityReport raw_metrics(const BenchmarkDataset& dataset, const AggregationPolicy& policy, std::uint64_t seed) {
    const auto& space = dataset.space();
    ComplexityReport r;
    r.dataset = dataset.name();
    r.np = space.dimension();
    r.pss = space.cardinality();
    std::size_t options = 0;
    for (std::size_t i = 0; i < space.dimension(); ++i)
        options += space.option_count(i);
    r.aop = static_cast<double>(options) / static_cast<double>(r.np);
    const auto values = dataset.aggregated_values(policy);
    r.skew = skewness(values);
    r.scarcity = scarcity_index(values);
    r.pib = parameter_importance_balance(dataset, policy, seed);
    return r;
}

std::vector<ComplexityReport> normalize_reports(std::vector<ComplexityReport> reports) {
    if (reports.size() < 2)
        throw DomainError("min-max normalization needs at least 2 datasets");
    for (std::size_t m = 0; m < kMetricCount; ++m) {
        double lo = reports.front().raw()[m], hi = lo;
        for (const auto& r : reports) {
            lo = std::min(lo, r.raw()[m]);
            hi = std::max(hi, r.raw()[m]);
        }
        for (auto& r : reports)
            r.normalized[m] = hi > lo ? (r.raw()[m] - lo) / (hi - lo) : 0.0;
    }
    double max_area = 0.0;
    for (const auto& r : reports)
        max_area = std::max(max_area, radar_area(r.normalized));
    for (auto& r : reports)
        r.radar_area_score = max_area > 0.0 ? radar_area(r.normalized) / max_area : 0.0;
    return reports;
}

std::vector<ComplexityReport> complexity_report(std::span<const BenchmarkDataset* const> datasets,
                                                const AggregationPolicy& policy, std::uint64_t seed) {
    if (datasets.size() < 2)
        throw DomainError("complexity report needs at least 2 datasets");
    std::vector<ComplexityReport> reports;
    for (const auto* d : datasets) {
        AggregationPolicy p = policy;
        p.selectivity = d->selectivity();
        reports.push_back(raw_metrics(*d, p, seed));
    }
    return normalize_reports(std::move(reports));
}

} // namespace catbench::complexity
