#pragma once

#include "catbench/kernels/execution.hpp"
#include "catbench/space/dataset.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace catbench::complexity {

// Fisher-Pearson coefficient g1 = m3 / m2^(3/2) with population moments.
// Throws DomainError for fewer than 2 values or zero variance.
double skewness(std::span<const double> values);

// 1 - |{v : v > 0.95 max}| / n.
double scarcity_index(std::span<const double> values);

inline constexpr std::size_t kForestTrees = 200;

// Per-parameter importances from a seeded random forest on one-hot encoded
// assignments (one row per measured key, target = aggregated scalar). Sums
// to 1, or all zeros for a constant objective.
std::vector<double> parameter_importances(const BenchmarkDataset& dataset, const AggregationPolicy& policy,
                                          std::uint64_t seed,
                                          kernels::Execution exec = kernels::Execution::parallel);

// 1 - population stddev of parameter_importances; 1.0 for K < 2 or a
// constant objective.
double parameter_importance_balance(const BenchmarkDataset& dataset, const AggregationPolicy& policy,
                                    std::uint64_t seed);

// Fixed spoke order for the radar polygon.
enum Metric : std::size_t { AOP = 0, NP, PSS, SKEW, SI, PIB, kMetricCount };

using MetricVector = std::array<double, kMetricCount>;

struct ComplexityReport {
    std::string dataset;
    double aop = 0.0;
    std::size_t np = 0;
    std::uint64_t pss = 0;
    double skew = 0.0;
    double scarcity = 0.0;
    double pib = 0.0;
    MetricVector normalized{};
    double radar_area_score = 0.0;

    MetricVector raw() const {
        return {aop, static_cast<double>(np), static_cast<double>(pss), skew, scarcity, pib};
    }
};

// Area of the regular six-spoke polygon: 1/2 sin(60 deg) sum_j v_j v_{j+1}.
double radar_area(const MetricVector& v);

// Raw metrics for one dataset; normalized fields are left zero.
ComplexityReport raw_metrics(const BenchmarkDataset& dataset, const AggregationPolicy& policy, std::uint64_t seed);

// Min-max normalizes each metric across the set (a metric that is constant
// across the set maps to 0), computes radar areas and divides them by the
// largest. Needs at least 2 reports.
std::vector<ComplexityReport> normalize_reports(std::vector<ComplexityReport> reports);

std::vector<ComplexityReport> complexity_report(std::span<const BenchmarkDataset* const> datasets,
                                                const AggregationPolicy& policy, std::uint64_t seed);

} // namespace catbench::complexity
