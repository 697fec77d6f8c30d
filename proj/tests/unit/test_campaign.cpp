#include "builders.hpp"

#include "catbench/campaign/campaign.hpp"
#include "catbench/core/human_optimizer.hpp"
#include "catbench/core/random_optimizer.hpp"
#include "catbench/space/dataset_io.hpp"

#include <doctest.h>

#include <set>

using namespace catbench;
using namespace catbench::campaign;

namespace {

const std::filesystem::path kFixtures = CATBENCH_FIXTURE_DIR;

CampaignConfig random_config(std::size_t budget = 5) {
    CampaignConfig c;
    c.dataset = std::make_shared<const BenchmarkDataset>(load_dataset(kFixtures / "chan_lam_like.json"));
    c.dataset_ref = "chan_lam_like.json";
    c.budget = budget;
    c.repeats = 4;
    c.base_seed = 10;
    return c;
}

void clear_timestamps(Trajectory& t) {
    for (auto& it : t.iterations)
        it.timestamp.clear();
}

} // namespace

TEST_CASE("session enforces suggest/observe order and budget") {
    auto space = std::make_shared<ParameterSpace>(testing::make_space({2, 2}));
    OptimizerSession s(space, {{"yield"}}, {3, 1, 7}, std::make_unique<RandomOptimizer>());
    const auto first = s.suggest();
    CHECK_THROWS_AS(s.suggest(), ProtocolError);
    CHECK_THROWS_AS(s.observe({}), ProtocolError);
    s.observe({{first.assignments[0], std::nullopt, Validity::off_table}});
    CHECK(s.remaining() == 2);
    for (int i = 0; i < 2; ++i) {
        const auto next = s.suggest();
        s.observe({{next.assignments[0], std::vector<MeasurementVector>{{1.0}}, Validity::valid}});
    }
    CHECK(s.complete());
    CHECK_THROWS_AS(s.suggest(), SessionComplete);
    std::set<Assignment> distinct;
    for (const auto& h : s.history())
        distinct.insert(h.assignment);
    CHECK(distinct.size() == 3);
}

TEST_CASE("random sampling is seeded and never repeats") {
    auto space = std::make_shared<ParameterSpace>(testing::make_space({4, 4}));
    auto draw = [&](std::uint64_t seed) {
        OptimizerSession s(space, {{"yield"}}, {16, 1, seed}, std::make_unique<RandomOptimizer>());
        std::vector<Assignment> out;
        while (!s.complete()) {
            const auto sug = s.suggest();
            out.push_back(sug.assignments[0]);
            s.observe({{sug.assignments[0], std::nullopt, Validity::off_table}});
        }
        return out;
    };
    const auto a = draw(1), b = draw(1), c = draw(2);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(std::set<Assignment>(a.begin(), a.end()).size() == 16);
}

TEST_CASE("human optimizer relays the staged batch") {
    auto space = std::make_shared<ParameterSpace>(testing::make_space({2, 2}));
    auto human = std::make_unique<HumanOptimizer>();
    auto* h = human.get();
    OptimizerSession s(space, {{"yield"}}, {2, 1, 0}, std::move(human));
    CHECK_THROWS_AS(s.suggest(), ProtocolError);
    Suggestion staged;
    staged.assignments = {Assignment{{"a2", "b1"}}};
    staged.validity = {Validity::valid};
    staged.reasoning.hypothesis = "second option of p1 matters";
    h->stage(staged);
    CHECK(s.suggest().assignments[0] == Assignment{{"a2", "b1"}});
}

TEST_CASE("missing-marker suggestions consume budget") {
    auto cfg = random_config(30);
    cfg.budget = 36;
    const auto t = run_campaign(cfg, 0);
    CHECK(t.suggestion_count() == 36);
    std::size_t missing = 0;
    for (const auto& o : t.observations())
        missing += !o.has_value();
    CHECK(missing == 2);
    CHECK(invalid_rate(t) == doctest::Approx(2.0 / 36.0));
}

TEST_CASE("trajectories round-trip through their file format") {
    auto cfg = random_config();
    const auto t = run_campaign(cfg, 1);
    CHECK(t.run_id == make_run_id(cfg, 1));
    CHECK(t.seed == derive_seed(10, 1));
    const auto text = serialize_trajectory(t);
    const auto back = parse_trajectory(text);
    CHECK(back == t);
    CHECK(serialize_trajectory(back) == text);
    for (const auto& it : t.iterations) {
        CHECK(it.timestamp.size() == 24);
        CHECK(it.timestamp.back() == 'Z');
    }
}

TEST_CASE("trajectory parsing rejects unknown schema versions") {
    auto j = to_json(run_campaign(random_config(), 0));
    j["schema_version"] = 99;
    CHECK_THROWS(parse_trajectory(j.dump()));
}

TEST_CASE("suite results do not depend on parallelism") {
    const auto requests = expand_repeats(random_config());
    REQUIRE(requests.size() == 4);
    auto serial = run_suite(requests, 1);
    auto parallel = run_suite(requests, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        clear_timestamps(serial[i]);
        clear_timestamps(parallel[i]);
        CHECK(serial[i] == parallel[i]);
        CHECK(serial[i].run_index == i);
    }
    CHECK(serial[0].assignments() != serial[1].assignments());
}

TEST_CASE("runs are written to the output directory") {
    auto cfg = random_config();
    cfg.output_dir = std::filesystem::temp_directory_path() / "catbench_unit_runs";
    std::filesystem::remove_all(cfg.output_dir);
    run_suite(expand_repeats(cfg), 2);
    const auto read = read_trajectories(cfg.output_dir);
    CHECK(read.size() == 4);
    std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("config validation") {
    auto cfg = random_config();
    cfg.budget = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = random_config();
    cfg.batch_size = 3;
    cfg.budget = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = random_config();
    cfg.method.modality = Modality::llm;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(modality_from_string("simplex"), ConfigError);
}

TEST_CASE("batched random campaigns keep iterations contiguous") {
    auto cfg = random_config(6);
    cfg.batch_size = 3;
    const auto t = run_campaign(cfg, 0);
    REQUIRE(t.iterations.size() == 2);
    CHECK(t.iterations[0].index == 1);
    CHECK(t.iterations[1].index == 2);
    CHECK(t.iterations[1].suggestions.size() == 3);
}

TEST_CASE("duplicates counted on a trajectory") {
    const auto space = testing::make_space({3});
    const Assignment a{{"a1"}}, b{{"a2"}}, c{{"a3"}};
    const auto t = testing::trajectory_of(space, {a, b, a, c, a, b}, {1.0, 2.0, 1.0, 3.0, 1.0, 2.0});
    CHECK(count_duplicates(t) == 2);
    CHECK(t.best()->first == 3.0);
    CHECK(t.best()->second == 3);
}
