#include "builders.hpp"
#include "oracles.hpp"

#include "catbench/bo/bo_optimizer.hpp"
#include "catbench/bo/chimera.hpp"
#include "catbench/bo/featurization.hpp"
#include "catbench/campaign/campaign.hpp"
#include "catbench/space/dataset_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <set>

using namespace catbench;

TEST_CASE("Chimera orders candidates like a brute-force cascade") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 1 + rng() % 3;
        const std::size_t n = 2 + rng() % 12;
        bo::ObjectiveMatrix v(n, std::vector<double>(m));
        for (auto& row : v)
            for (auto& x : row)
                x = static_cast<double>(rng() % 6);
        std::vector<double> tol;
        for (std::size_t k = 0; k < m; ++k)
            tol.push_back(static_cast<double>(rng() % 5) / 4.0);
        const auto res = bo::chimera_scalarize(v, tol);
        const auto keys = oracle::cascade_keys(v, tol);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const int cmp = oracle::cascade_compare(keys[a], keys[b]);
                // cmp > 0: a is better, and lower merit is better
                if (cmp > 0)
                    CHECK(res.merit[a] < res.merit[b]);
                else if (cmp < 0)
                    CHECK(res.merit[a] > res.merit[b]);
            }
    }
}

TEST_CASE("Chimera with one objective is monotone in the value") {
    const bo::ObjectiveMatrix v{{1.0}, {5.0}, {3.0}};
    const auto r = bo::chimera_scalarize(v, {0.3});
    CHECK(r.merit[1] < r.merit[2]);
    CHECK(r.merit[2] < r.merit[0]);
}

TEST_CASE("descriptor CSV parsing and feature selection") {
    const auto t = bo::parse_descriptor_csv("label,a,b,c\n\"x,1\",1,2,oops\ny,2,2,3\nz,3,2,4\n");
    CHECK(t.feature_names == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.count("x,1") == 1);
    CHECK_FALSE(t.rows.at("x,1")[2].has_value());
    CHECK_THROWS_AS(bo::parse_descriptor_csv("label,a\nx,1\nx,2\n"), ConfigError);

    // b is constant and c is non-numeric for one option: only a survives.
    const ParameterSpace space({{"p", {"x,1", "y", "z"}}});
    const std::vector<bo::DescriptorTable> tables{t};
    const auto f = bo::build_featurization(space, bo::FeaturizationMode::descriptors, &tables);
    REQUIRE(f.parameters.size() == 1);
    CHECK(f.parameters[0].selected_names == std::vector<std::string>{"a"});
    double mean = 0.0;
    for (const auto& row : f.parameters[0].encoded)
        mean += row[0];
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("correlation filter keeps at most ten features per parameter") {
    std::ostringstream csv;
    csv << "label";
    for (int k = 0; k < 30; ++k)
        csv << ",f" << k;
    csv << "\n";
    std::mt19937_64 rng(2);
    std::vector<std::string> labels;
    for (int o = 0; o < 8; ++o) {
        labels.push_back("o" + std::to_string(o));
        csv << labels.back();
        const double base = static_cast<double>(rng() % 100);
        for (int k = 0; k < 30; ++k)
            // pairs (2i, 2i+1) are exact multiples of each other
            csv << "," << (k % 2 ? 3.0 * base : base) + (k < 20 ? 0.0 : static_cast<double>(rng() % 50)) * (k / 2 + 1);
        csv << "\n";
    }
    const ParameterSpace space({{"p", labels}});
    const std::vector<bo::DescriptorTable> tables{bo::parse_descriptor_csv(csv.str())};
    const auto f = bo::build_featurization(space, bo::FeaturizationMode::descriptors, &tables);
    CHECK(f.parameters[0].selected.size() <= bo::kMaxFeaturesPerParameter);
    const auto& enc = f.parameters[0].encoded;
    for (std::size_t a = 0; a < f.parameters[0].selected.size(); ++a)
        for (std::size_t b = a + 1; b < f.parameters[0].selected.size(); ++b) {
            double r = 0.0;
            for (const auto& row : enc)
                r += row[a] * row[b];
            r /= static_cast<double>(enc.size());
            CHECK(std::abs(r) <= bo::kCorrelationCutoff + 1e-9);
        }
}

TEST_CASE("one-hot encoding has exactly one hot column per parameter") {
    const auto space = testing::make_space({3, 2, 4});
    const auto f = bo::build_featurization(space, bo::FeaturizationMode::one_hot);
    const auto v = f.one_hot(OptionIndices{2, 0, 3});
    CHECK(v.size() == 9);
    CHECK(std::count(v.begin(), v.end(), 1.0) == 3);
    CHECK(v[2] == 1.0);
    CHECK(v[3] == 1.0);
    CHECK(v[8] == 1.0);
}

namespace {

campaign::CampaignConfig bo_config(std::shared_ptr<const BenchmarkDataset> ds, std::size_t budget,
                                   bo::AcquisitionKind acq = bo::AcquisitionKind::ei) {
    campaign::CampaignConfig c;
    c.dataset = std::move(ds);
    c.method.modality = campaign::Modality::bo;
    c.method.bo.acquisition = acq;
    c.method.bo.restarts = 2;
    c.budget = budget;
    c.repeats = 1;
    return c;
}

} // namespace

TEST_CASE("BO never repeats a suggestion and exhausts small spaces") {
    const auto ds = testing::full_dataset("grid", {3, 3}, [](const OptionIndices& k) { return k[0] * 3.0 + k[1]; });
    for (auto acq : {bo::AcquisitionKind::ei, bo::AcquisitionKind::pi, bo::AcquisitionKind::ucb}) {
        campaign::CampaignRun run(bo_config(ds, 9, acq), 0);
        run.run_to_completion();
        const auto picks = run.trajectory().assignments();
        CHECK(picks.size() == 9);
        CHECK(std::set<Assignment>(picks.begin(), picks.end()).size() == 9);
        CHECK_THROWS_AS(run.session().suggest(), SessionComplete);
    }
}

TEST_CASE("BO is reproducible for a fixed seed and finds an obvious optimum") {
    const auto ds = testing::full_dataset("peak", {6, 6},
                                          [](const OptionIndices& k) { return 50.0 * (k[0] == 4) + 10.0 * (k[1] == 1); });
    auto cfg = bo_config(ds, 15);
    cfg.base_seed = 3;
    const auto a = campaign::run_campaign(cfg);
    const auto b = campaign::run_campaign(cfg);
    CHECK(a.assignments() == b.assignments());
    REQUIRE(a.best().has_value());
    CHECK(a.best()->first == 60.0);
}

TEST_CASE("BO rejects batches and bad settings") {
    const auto ds = testing::full_dataset("g", {2, 2}, [](const OptionIndices& k) { return k[0] + 0.0; });
    auto cfg = bo_config(ds, 4);
    cfg.batch_size = 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    bo::BOConfig bad;
    bad.ucb_beta = -1.0;
    CHECK_THROWS_AS(bo::BayesianOptimizer{bad}, ConfigError);
    bad = {};
    bad.initial_points = 0;
    CHECK_THROWS_AS(bo::BayesianOptimizer{bad}, ConfigError);
}

TEST_CASE("BO runs with descriptor featurization on the Chan-Lam fixture") {
    const std::filesystem::path dir = CATBENCH_FIXTURE_DIR;
    auto ds = std::make_shared<const BenchmarkDataset>(load_dataset(dir / "chan_lam_like.json"));
    auto cfg = bo_config(ds, 8);
    cfg.method.bo.featurization = bo::FeaturizationMode::descriptors;
    for (const char* p : {"catalyst", "base", "solvent"})
        cfg.method.bo.descriptors.push_back(bo::load_descriptor_csv(dir / (std::string("chan_lam_") + p + "_descriptors.csv")));
    const auto t = campaign::run_campaign(cfg);
    CHECK(t.status == campaign::RunStatus::complete);
    CHECK(t.suggestion_count() == 8);
}
