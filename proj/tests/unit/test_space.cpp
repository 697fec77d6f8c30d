#include "builders.hpp"

#include "catbench/error.hpp"
#include "catbench/space/dataset_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>

using namespace catbench;

TEST_CASE("flat index and unflatten are inverse bijections") {
    const auto space = testing::make_space({3, 4, 2});
    CHECK(space.cardinality() == 24);
    std::set<std::uint64_t> seen;
    for (const auto& key : enumerate_space(space)) {
        const auto flat = space.flat_index(key);
        CHECK(flat < space.cardinality());
        CHECK(space.unflatten(flat) == key);
        seen.insert(flat);
    }
    CHECK(seen.size() == 24);
    CHECK(space.flat_index(OptionIndices{1, 0, 0}) == 8);
}

TEST_CASE("enumeration is lexicographic with the first parameter most significant") {
    const auto space = testing::make_space({2, 3});
    const auto all = enumerate_space(space);
    REQUIRE(all.size() == 6);
    CHECK(all.front() == OptionIndices{0, 0});
    CHECK(all[1] == OptionIndices{0, 1});
    CHECK(all[3] == OptionIndices{1, 0});
}

TEST_CASE("resolve keeps unknown labels distinct from structural errors") {
    const auto space = testing::make_space({2, 2});
    CHECK(space.resolve(Assignment{{"a1", "b2"}}) == OptionIndices{0, 1});
    CHECK_FALSE(space.resolve(Assignment{{"a1", "Toluene"}}).has_value());
    CHECK_THROWS_AS(space.resolve(Assignment{{"a1"}}), StructuralError);
    CHECK_THROWS_AS(space.resolve_or_throw(Assignment{{"zz", "b1"}}), StructuralError);
    CHECK(space.labels_of(OptionIndices{1, 0}) == Assignment{{"a2", "b1"}});
}

TEST_CASE("from_named demands every parameter and nothing else") {
    const auto space = testing::make_space({2, 2});
    CHECK(space.from_named({{"p1", "a2"}, {"p2", "b1"}}) == Assignment{{"a2", "b1"}});
    CHECK_THROWS(space.from_named({{"p1", "a2"}}));
    CHECK_THROWS(space.from_named({{"p1", "a2"}, {"p2", "b1"}, {"p3", "x"}}));
}

TEST_CASE("spaces reject duplicate names and empty option lists") {
    using Params = std::vector<Parameter>;
    CHECK_THROWS(ParameterSpace(Params{{"x", {"a", "b"}}, {"x", {"c"}}}));
    CHECK_THROWS(ParameterSpace(Params{{"x", {"a", "a"}}}));
    CHECK_THROWS(ParameterSpace(Params{{"x", {}}}));
}

TEST_CASE("aggregation modes and weighted selectivity") {
    const std::vector<MeasurementVector> group{{40.0}, {60.0}, {50.0}};
    CHECK(aggregate_group(group, {AggregationMode::lower_bound}) == 40.0);
    CHECK(aggregate_group(group, {AggregationMode::upper_bound}) == 60.0);
    CHECK(aggregate_group(group, {AggregationMode::mean}) == doctest::Approx(50.0));

    CHECK(weighted_selectivity(0.0, 0.0) == 0.0);
    CHECK(weighted_selectivity(30.0, 10.0) == doctest::Approx(22.5));
    CHECK_THROWS_AS(weighted_selectivity(-1.0, 2.0), DomainError);
    const std::vector<MeasurementVector> pairs{{30.0, 10.0}, {20.0, 0.0}};
    CHECK(aggregate_group(pairs, {AggregationMode::lower_bound, true}) == doctest::Approx(20.0));
}

TEST_CASE("lookup returns the missing-marker for unmeasured keys") {
    BenchmarkDataset ds("d", testing::make_space({2, 2}), {{"yield"}});
    ds.add_measurement(OptionIndices{0, 0}, {10.0});
    ds.add_measurement(OptionIndices{0, 0}, {12.0});
    const auto hit = ds.lookup(Assignment{{"a1", "b1"}});
    REQUIRE(hit.has_value());
    CHECK(hit->size() == 2);
    CHECK_FALSE(ds.lookup(Assignment{{"a2", "b2"}}).has_value());
    CHECK_THROWS_AS(ds.lookup(Assignment{{"a9", "b2"}}), StructuralError);
    CHECK_THROWS_AS(ds.add_measurement(OptionIndices{0, 1}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(ds.add_measurement(OptionIndices{0, 1}, {std::nan("")}), DomainError);
}

TEST_CASE("dataset manifests round-trip through serialization") {
    for (const char* name : {"small_2x3.json", "chan_lam_like.json", "heavy_zero.json"}) {
        CAPTURE(name);
        const auto ds = load_dataset(std::filesystem::path(CATBENCH_FIXTURE_DIR) / name);
        const auto again = parse_dataset(serialize_dataset(ds));
        CHECK(again == ds);
    }
}

TEST_CASE("validation reports the offending line") {
    const std::string text = "{\n"
                             "  \"name\": \"d\",\n"
                             "  \"parameters\": [{\"name\": \"x\", \"options\": [\"a\", \"b\"]}],\n"
                             "  \"objectives\": [{\"name\": \"yield\", \"goal\": \"maximize\"}],\n"
                             "  \"rows\": [\n"
                             "    {\"assignment\": {\"x\": \"a\"}, \"values\": {\"yield\": 1}},\n"
                             "    {\"assignment\": {\"x\": \"c\"}, \"values\": {\"yield\": 2}}\n"
                             "  ]\n"
                             "}\n";
    const auto d = validate_dataset_text(text);
    REQUIRE(d.has_value());
    CHECK(d->line == 7);
    CHECK(d->message.find("c") != std::string::npos);

    const auto broken = validate_dataset_text("{\n  \"name\": \"d\",\n  oops\n}");
    REQUIRE(broken.has_value());
    CHECK(broken->line == 3);

    CHECK_FALSE(validate_dataset_text(read_text_file(std::filesystem::path(CATBENCH_FIXTURE_DIR) / "small_2x3.json"))
                    .has_value());
    CHECK_THROWS_AS(parse_dataset(text), DatasetFormatError);
}

TEST_CASE("selectivity datasets need two objectives") {
    const std::string text = R"({"name": "d", "selectivity": true,
        "parameters": [{"name": "x", "options": ["a"]}],
        "objectives": [{"name": "yield", "goal": "maximize"}],
        "rows": [{"assignment": {"x": "a"}, "values": {"yield": 1}}]})";
    CHECK(validate_dataset_text(text).has_value());
}
