#include "catbench/analytics/statistics.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

namespace catbench::analytics {

namespace {

void require_nonempty(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty())
        throw DomainError("both samples must be non-empty");
}

// Twice the midrank of every pooled value: x first, then y.
std::vector<long> doubled_midranks(std::span<const double> x, std::span<const double> y,
                                   std::vector<std::size_t>* tie_sizes = nullptr) {
    const std::size_t n = x.size() + y.size();
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<long> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]])
            ++j;
        const long r2 = static_cast<long>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = r2;
        if (tie_sizes)
            tie_sizes->push_back(j - i + 1);
        i = j + 1;
    }
    return ranks;
}

} // namespace

double wilcoxon_rank_sum_exact(std::span<const double> x, std::span<const double> y) {
    require_nonempty(x, y);
    const auto ranks = doubled_midranks(x, y);
    const std::size_t n = ranks.size();
    // Work with the smaller group; the two-sided p-value is the same.
    const bool use_x = x.size() <= y.size();
    const std::size_t m = use_x ? x.size() : y.size();
    long observed = 0;
    for (std::size_t i = 0; i < m; ++i)
        observed += ranks[use_x ? i : x.size() + i];

    long max_sum = 0;
    {
        auto sorted = ranks;
        std::sort(sorted.rbegin(), sorted.rend());
        for (std::size_t i = 0; i < m; ++i)
            max_sum += sorted[i];
    }
    std::vector<std::vector<double>> ways(m + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t item = 0; item < n; ++item) {
        const long r = ranks[item];
        for (std::size_t k = std::min(m, item + 1); k >= 1; --k) {
            auto& dst = ways[k];
            const auto& src = ways[k - 1];
            for (long s = max_sum; s >= r; --s)
                dst[static_cast<std::size_t>(s)] += src[static_cast<std::size_t>(s - r)];
        }
    }
    const long expected = static_cast<long>(m * (n + 1));
    const long dev = std::labs(observed - expected);
    double total = 0.0, tail = 0.0;
    for (long s = 0; s <= max_sum; ++s) {
        const double w = ways[m][static_cast<std::size_t>(s)];
        total += w;
        if (std::labs(s - expected) >= dev)
            tail += w;
    }
    return std::min(1.0, tail / total);
}

double wilcoxon_rank_sum_normal(std::span<const double> x, std::span<const double> y) {
    require_nonempty(x, y);
    std::vector<std::size_t> ties;
    const auto ranks = doubled_midranks(x, y, &ties);
    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());
    const double n = n1 + n2;
    double w = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        w += 0.5 * static_cast<double>(ranks[i]);
    const double u = w - n1 * (n1 + 1.0) / 2.0;
    const double mu = n1 * n2 / 2.0;
    double tie_term = 0.0;
    for (std::size_t t : ties) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(var > 0.0))
        return 1.0;
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y) {
    if (std::min(x.size(), y.size()) < kExactRankSumLimit)
        return wilcoxon_rank_sum_exact(x, y);
    return wilcoxon_rank_sum_normal(x, y);
}

double cliffs_delta(std::span<const double> x, std::span<const double> y) {
    require_nonempty(x, y);
    long long more = 0, less = 0;
    for (double a : x)
        for (double b : y) {
            more += a > b;
            less += a < b;
        }
    return static_cast<double>(more - less) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

EffectSize effect_size(double delta) {
    const double d = std::abs(delta);
    if (d < 0.147)
        return EffectSize::negligible;
    if (d < 0.33)
        return EffectSize::small;
    if (d < 0.474)
        return EffectSize::medium;
    return EffectSize::large;
}

std::string_view to_string(EffectSize e) {
    switch (e) {
    case EffectSize::negligible: return "negligible";
    case EffectSize::small: return "small";
    case EffectSize::medium: return "medium";
    case EffectSize::large: return "large";
    }
    return "negligible";
}

double median(std::vector<double> v) {
    if (v.empty())
        throw DomainError("median of an empty sample");
    const std::size_t h = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(h), v.end());
    const double hi = v[h];
    if (v.size() % 2 == 1)
        return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(h));
    return 0.5 * (lo + hi);
}

namespace {

double percentile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

} // namespace

MedianCI bootstrap_median_ci(std::span<const double> sample, std::size_t n_boot, double confidence,
                             std::uint64_t seed) {
    if (sample.empty())
        throw DomainError("bootstrap needs a non-empty sample");
    if (n_boot < 100)
        throw DomainError("bootstrap needs at least 100 resamples");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("confidence must lie in (0, 1)");
    const std::vector<double> data(sample.begin(), sample.end());
    MedianCI out;
    out.median = median(data);
    std::mt19937_64 rng(seed);
    std::vector<double> medians;
    medians.reserve(n_boot);
    std::vector<double> draw(data.size());
    for (std::size_t b = 0; b < n_boot; ++b) {
        for (auto& v : draw)
            v = data[rng() % data.size()];
        medians.push_back(median(draw));
    }
    std::sort(medians.begin(), medians.end());
    const double alpha = (1.0 - confidence) / 2.0;
    out.lower = percentile_sorted(medians, alpha);
    out.upper = percentile_sorted(medians, 1.0 - alpha);
    return out;
}

StatsReport stats_battery(const MethodGroups& groups, const std::optional<std::string>& baseline, std::uint64_t seed,
                          std::size_t n_boot, double confidence) {
    if (groups.size() < 2)
        throw DomainError("stats battery needs at least two methods");
    StatsReport r;
    const std::size_t k = groups.size();
    for (const auto& [name, sample] : groups) {
        if (sample.empty())
            throw DomainError("method '" + name + "' has no samples");
        r.methods.push_back(name);
    }
    r.p_matrix.assign(k, std::vector<double>(k, 1.0));
    r.delta_matrix.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double p = wilcoxon_rank_sum(groups[i].second, groups[j].second);
            const double d = cliffs_delta(groups[i].second, groups[j].second);
            r.p_matrix[i][j] = r.p_matrix[j][i] = p;
            r.delta_matrix[i][j] = d;
            r.delta_matrix[j][i] = -d;
            r.pairs.push_back({groups[i].first, groups[j].first, p, d, effect_size(d)});
        }

    std::optional<std::size_t> base;
    if (baseline)
        for (std::size_t i = 0; i < k; ++i)
            if (groups[i].first == *baseline)
                base = i;
    for (std::size_t i = 0; i < k; ++i) {
        MethodSummary s;
        s.method = groups[i].first;
        s.n = groups[i].second.size();
        s.ci = bootstrap_median_ci(groups[i].second, n_boot, confidence, seed ^ i);
        if (base && *base != i) {
            s.median_difference = s.ci.median - median(groups[*base].second);
            s.p_vs_baseline = r.p_matrix[i][*base];
            s.delta_vs_baseline = r.delta_matrix[i][*base];
        }
        r.summaries.push_back(std::move(s));
    }
    return r;
}

} // namespace catbench::analytics
