#include "builders.hpp"
#include "oracles.hpp"

#include "catbench/analytics/entropy.hpp"
#include "catbench/analytics/report.hpp"
#include "catbench/analytics/statistics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace catbench;
using namespace catbench::analytics;

namespace {

std::string first_line(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

std::vector<std::string> lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream s(csv);
    for (std::string l; std::getline(s, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("selection counts skip labels outside the option list") {
    const auto space = testing::make_space({4, 2});
    const std::vector<Assignment> picks{{{"a1", "b1"}}, {{"a1", "Toluene"}}, {{"a2", "b1"}}, {{"a3", "b2"}},
                                        {{"a1", "b1"}}};
    const auto c = selection_counts(space, picks);
    CHECK(c.counts[0] == std::vector<std::size_t>{3, 1, 1, 0});
    CHECK(c.totals[0] == 5);
    CHECK(c.totals[1] == 4);
    CHECK(parameter_entropies(c)[1] == doctest::Approx(oracle::entropy({"b1", "b1", "b2", "b1"}, 2)));
}

TEST_CASE("entropy edge cases") {
    const std::vector<std::size_t> hand{2, 1, 1, 0};
    CHECK(normalized_entropy(hand, 4) == 0.75);
    const std::vector<std::size_t> one{5};
    CHECK(normalized_entropy(one, 5) == 0.0);
    const std::vector<std::size_t> none{0, 0};
    CHECK(normalized_entropy(none, 0) == 0.0);
    CHECK_THROWS(normalized_entropy(hand, 5));
    SelectionCounts two{{{1, 1}, {2, 0}}, {2, 2}};
    CHECK(cumulative_entropy(two) == doctest::Approx(0.5));
}

TEST_CASE("entropy to best stops at the first occurrence of the best value") {
    const auto space = testing::make_space({3});
    const auto t = testing::trajectory_of(space, {{{"a1"}}, {{"a2"}}, {{"a3"}}, {{"a2"}}},
                                          {1.0, 5.0, 3.0, 5.0});
    const auto r = entropy_report(t);
    CHECK(r.best_position == 2);
    CHECK(r.best_value == 5.0);
    CHECK(*r.entropy_to_best == doctest::Approx(std::log(2.0) / std::log(3.0)));
}

TEST_CASE("convergence iterations are monotone in the fraction") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::optional<double>> v;
        for (int i = 0; i < 20; ++i)
            v.push_back(rng() % 7 == 0 ? std::nullopt : std::optional<double>(static_cast<double>(rng() % 100)));
        std::size_t prev = 0;
        bool reached = true;
        for (double f : {0.5, 0.7, 0.8, 0.9, 0.95, 0.99}) {
            const auto it = convergence_iteration(v, f, 100.0);
            if (!reached) {
                CHECK_FALSE(it.has_value());
                continue;
            }
            reached = it.has_value();
            if (it) {
                CHECK(*it >= prev);
                prev = *it;
            }
        }
    }
    const std::vector<std::optional<double>> v{10.0, std::nullopt, 81.0, 96.0};
    CHECK(convergence_iteration(v, 0.8, 100.0) == 3);
    CHECK(convergence_iteration(v, 0.95, 100.0) == 4);
    CHECK_FALSE(convergence_iteration(v, 0.96, 100.0).has_value());
}

TEST_CASE("rank-sum p-values agree with exhaustive enumeration for small samples") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(1 + rng() % 6), y(1 + rng() % 6);
        for (auto& v : x)
            v = static_cast<double>(rng() % 5);
        for (auto& v : y)
            v = static_cast<double>(rng() % 5);
        CHECK(wilcoxon_rank_sum(x, y) == doctest::Approx(oracle::rank_sum_exact(x, y)).epsilon(1e-9));
    }
}

TEST_CASE("normal approximation is close to exact for larger samples") {
    std::mt19937_64 rng(13);
    std::vector<double> x(12), y(12);
    for (auto& v : x)
        v = std::normal_distribution<double>()(rng);
    for (auto& v : y)
        v = std::normal_distribution<double>(0.8)(rng);
    CHECK(std::abs(wilcoxon_rank_sum_normal(x, y) - wilcoxon_rank_sum_exact(x, y)) < 0.01);
    const std::vector<double> same{1, 2, 3, 4, 5};
    CHECK(wilcoxon_rank_sum(same, same) == doctest::Approx(1.0));
}

TEST_CASE("Cliff's delta bounds and effect labels") {
    const std::vector<double> lo{1, 2, 3}, hi{10, 11};
    CHECK(cliffs_delta(hi, lo) == 1.0);
    CHECK(cliffs_delta(lo, hi) == -1.0);
    CHECK(cliffs_delta(lo, lo) == 0.0);
    CHECK(effect_size(0.1) == EffectSize::negligible);
    CHECK(effect_size(-0.2) == EffectSize::small);
    CHECK(effect_size(0.4) == EffectSize::medium);
    CHECK(effect_size(-0.9) == EffectSize::large);
    CHECK(to_string(EffectSize::medium) == "medium");
}

TEST_CASE("bootstrap CI brackets the median on continuous data") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(20);
        for (auto& x : v)
            x = std::lognormal_distribution<double>(0.0, 1.0)(rng);
        const auto ci = bootstrap_median_ci(v, kBootstrapSamples, kBootstrapConfidence, static_cast<std::uint64_t>(trial));
        CHECK(ci.median == doctest::Approx(median(v)));
        CHECK(ci.lower <= ci.median);
        CHECK(ci.median <= ci.upper);
        const auto again = bootstrap_median_ci(v, kBootstrapSamples, kBootstrapConfidence, static_cast<std::uint64_t>(trial));
        CHECK(again.lower == ci.lower);
        CHECK(again.upper == ci.upper);
    }
    CHECK(median({3.0, 1.0, 2.0, 10.0}) == 2.5);
}

TEST_CASE("stats battery matrices are consistent") {
    MethodGroups g{{"random", {1, 2, 3, 4, 5, 6}}, {"bo", {4, 5, 6, 7, 8, 9}}, {"llm", {2, 4, 6, 8, 10, 12}}};
    const auto r = stats_battery(g);
    REQUIRE(r.methods.size() == 3);
    CHECK(r.pairs.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.p_matrix[i][i] == 1.0);
        CHECK(r.delta_matrix[i][i] == 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(r.p_matrix[i][j] == r.p_matrix[j][i]);
            CHECK(r.delta_matrix[i][j] == -r.delta_matrix[j][i]);
        }
    }
    CHECK_FALSE(r.summaries[0].p_vs_baseline.has_value());
    REQUIRE(r.summaries[1].median_difference.has_value());
    CHECK(*r.summaries[1].median_difference == 3.0);
    CHECK(*r.summaries[1].delta_vs_baseline == doctest::Approx(oracle::cliffs_delta(g[1].second, g[0].second)));
}

TEST_CASE("report CSVs carry their headers and one row per run") {
    const auto space = testing::make_space({2, 2});
    auto a = testing::trajectory_of(space, {{{"a1", "b1"}}, {{"a2", "b2"}}}, {1.0, 4.0}, "random");
    auto b = testing::trajectory_of(space, {{{"a2", "b1"}}, {{"a1", "b1"}}}, {std::nullopt, 2.0}, "bo");
    auto aborted = testing::trajectory_of(space, {{{"a1", "b2"}}}, {9.0}, "bo");
    aborted.status = campaign::RunStatus::aborted;
    aborted.run_id = "bo-aborted";
    const std::vector<campaign::Trajectory> runs{a, b, aborted};

    CHECK(first_line(entropy_csv(runs)) ==
          "run_id,method,dataset,status,best_value,best_position,cumulative_entropy,entropy_to_best,parameter_entropies");
    CHECK(lines(entropy_csv(runs)).size() == 4);
    CHECK(first_line(convergence_csv(runs, {0.8, 0.95}, 4.0)) == "run_id,method,dataset,fraction,reference_max,iteration");
    CHECK(lines(convergence_csv(runs, {0.8, 0.95}, 4.0)).size() == 7);
    CHECK(first_line(duplicates_csv(runs)) == "run_id,method,dataset,status,suggestions,duplicates,invalid_rate");

    const auto groups = best_values_by_method(runs);
    REQUIRE(groups.size() == 2);
    CHECK(groups[1].second == std::vector<double>{2.0});
    CHECK(best_values_by_method(runs, true)[1].second.size() == 2);

    const auto report = stats_battery(groups);
    CHECK(first_line(stats_csv(report)) == "method_a,method_b,p_value,delta,label");
    CHECK(first_line(summary_csv(report)) ==
          "method,n,median,ci_lower,ci_upper,median_vs_baseline,p_vs_baseline,delta_vs_baseline");
    CHECK(csv_field("a,\"b\"") == "\"a,\"\"b\"\"\"");
}
