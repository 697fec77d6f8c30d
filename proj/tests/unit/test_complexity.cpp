#include "builders.hpp"

#include "catbench/complexity/complexity.hpp"
#include "catbench/error.hpp"
#include "catbench/space/dataset_io.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace catbench;
using namespace catbench::complexity;

TEST_CASE("skewness matches the population moment definition") {
    const std::vector<double> v{0, 0, 0, 1, 5};
    double mean = 1.2, m2 = 0.0, m3 = 0.0;
    for (double x : v) {
        m2 += (x - mean) * (x - mean) / 5.0;
        m3 += (x - mean) * (x - mean) * (x - mean) / 5.0;
    }
    CHECK(skewness(v) == doctest::Approx(m3 / std::pow(m2, 1.5)));
    const std::vector<double> sym{1, 2, 3, 4, 5};
    CHECK(skewness(sym) == doctest::Approx(0.0));
    const std::vector<double> flat{2, 2, 2};
    CHECK_THROWS_AS(skewness(flat), DomainError);
    CHECK_THROWS_AS(skewness(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("skewness and scarcity are invariant under positive scaling") {
    const std::vector<double> v{0, 0, 3, 10, 40, 95, 100};
    std::vector<double> w;
    for (double x : v)
        w.push_back(2.5 * x);
    CHECK(skewness(w) == doctest::Approx(skewness(v)));
    CHECK(scarcity_index(w) == scarcity_index(v));
    CHECK(scarcity_index(v) == doctest::Approx(1.0 - 1.0 / 7.0));
}

TEST_CASE("radar area of the unit hexagon") {
    const MetricVector ones{1, 1, 1, 1, 1, 1};
    CHECK(radar_area(ones) == doctest::Approx(3.0 * std::sin(std::numbers::pi / 3.0)));
    const MetricVector zeros{};
    CHECK(radar_area(zeros) == 0.0);
}

TEST_CASE("normalization maps each metric onto [0, 1] across the set") {
    std::vector<ComplexityReport> reps(3);
    for (std::size_t i = 0; i < 3; ++i) {
        reps[i].dataset = "d" + std::to_string(i);
        reps[i].aop = 2.0 + static_cast<double>(i);
        reps[i].np = 3;
        reps[i].pss = 10 * (i + 1);
        reps[i].skew = -1.0 + static_cast<double>(i);
        reps[i].scarcity = 0.9;
        reps[i].pib = 0.5 + 0.1 * static_cast<double>(i);
    }
    const auto out = normalize_reports(reps);
    CHECK(out[0].normalized[AOP] == 0.0);
    CHECK(out[2].normalized[AOP] == 1.0);
    CHECK(out[1].normalized[AOP] == doctest::Approx(0.5));
    CHECK(out[1].normalized[NP] == 0.0);
    CHECK(out[1].normalized[SI] == 0.0);
    double best = 0.0;
    for (const auto& r : out)
        best = std::max(best, r.radar_area_score);
    CHECK(best == doctest::Approx(1.0));
    CHECK_THROWS_AS(normalize_reports({reps[0]}), DomainError);
}

TEST_CASE("raw metrics on the small fixture") {
    const auto ds = load_dataset(std::filesystem::path(CATBENCH_FIXTURE_DIR) / "small_2x3.json");
    const auto r = raw_metrics(ds, ds.default_policy(), 1);
    CHECK(r.np == 2);
    CHECK(r.pss == 6);
    CHECK(r.aop == doctest::Approx(2.5));
    CHECK(r.pib >= 0.0);
    CHECK(r.pib <= 1.0);
}

TEST_CASE("importances ignore option relabelling and execution route") {
    const auto a = testing::full_dataset("a", {6, 6}, [](const OptionIndices& k) { return 10.0 * k[0] + k[1]; });
    const auto b = testing::full_dataset("b", {6, 6}, [](const OptionIndices& k) { return 10.0 * (5 - k[0]) + k[1]; });
    const auto pol = a->default_policy();
    const auto ia = parameter_importances(*a, pol, 4, kernels::Execution::serial);
    const auto ip = parameter_importances(*a, pol, 4, kernels::Execution::parallel);
    CHECK(ia == ip);
    const auto ib = parameter_importances(*b, pol, 4);
    CHECK(ia[0] > 0.9);
    CHECK(ib[0] > 0.9);
    CHECK(ia[0] + ia[1] == doctest::Approx(1.0));

    const auto flat = testing::full_dataset("c", {3, 3}, [](const OptionIndices&) { return 7.0; });
    for (double v : parameter_importances(*flat, pol, 1))
        CHECK(v == 0.0);
    CHECK(parameter_importance_balance(*flat, pol, 1) == 1.0);
}

TEST_CASE("a single-parameter space is perfectly balanced") {
    const auto one = testing::full_dataset("one", {5}, [](const OptionIndices& k) { return 1.0 * k[0]; });
    CHECK(parameter_importance_balance(*one, one->default_policy(), 3) == 1.0);
}
