#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace catbench::analytics {

inline constexpr std::size_t kBootstrapSamples = 1000;
inline constexpr double kBootstrapConfidence = 0.95;
// Below this smaller-sample size the rank-sum p-value is computed exactly.
inline constexpr std::size_t kExactRankSumLimit = 8;

// Two-sided rank-sum p-value with midranks for ties. Exact permutation
// distribution of the midrank sum when min(|x|, |y|) < kExactRankSumLimit,
// otherwise the normal approximation with tie and 0.5 continuity correction.
double wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y);
double wilcoxon_rank_sum_exact(std::span<const double> x, std::span<const double> y);
double wilcoxon_rank_sum_normal(std::span<const double> x, std::span<const double> y);

double cliffs_delta(std::span<const double> x, std::span<const double> y);

enum class EffectSize { negligible, small, medium, large };
EffectSize effect_size(double delta);
std::string_view to_string(EffectSize e);

double median(std::vector<double> v);

struct MedianCI {
    double median = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

// Percentile bootstrap. Resample index = rng() % n with std::mt19937_64(seed);
// percentiles interpolate linearly between order statistics.
MedianCI bootstrap_median_ci(std::span<const double> sample, std::size_t n_boot = kBootstrapSamples,
                             double confidence = kBootstrapConfidence, std::uint64_t seed = 0);

struct PairwiseStat {
    std::string method_a;
    std::string method_b;
    double p_value = 1.0;
    double delta = 0.0; // Cliff's delta of a over b
    EffectSize label = EffectSize::negligible;
};

struct MethodSummary {
    std::string method;
    std::size_t n = 0;
    MedianCI ci;
    // Against the baseline group, when present and distinct.
    std::optional<double> median_difference;
    std::optional<double> p_vs_baseline;
    std::optional<double> delta_vs_baseline;
};

struct StatsReport {
    std::vector<std::string> methods;
    std::vector<PairwiseStat> pairs;           // i < j in method order
    std::vector<std::vector<double>> p_matrix; // [i][j]
    std::vector<std::vector<double>> delta_matrix;
    std::vector<MethodSummary> summaries;
};

using MethodGroups = std::vector<std::pair<std::string, std::vector<double>>>;

StatsReport stats_battery(const MethodGroups& groups, const std::optional<std::string>& baseline = "random",
                          std::uint64_t seed = 0, std::size_t n_boot = kBootstrapSamples,
                          double confidence = kBootstrapConfidence);

} // namespace catbench::analytics
