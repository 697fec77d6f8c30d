#include "catbench/campaign/trajectory.hpp"
#include "catbench/service/leaderboard.hpp"
#include "catbench/service/service.hpp"
#include "catbench/space/dataset_io.hpp"

#include <doctest.h>
#include <httplib.h>

#include <fstream>
#include <thread>

using namespace catbench;
using namespace catbench::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CATBENCH_FIXTURE_DIR;

std::string small_manifest() { return read_text_file(kFixtures / "small_2x3.json"); }

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("catbench_unit_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string human_campaign(Service& s, std::size_t budget = 3, const std::string& auth = {}) {
    const auto r = s.create_campaign(json{{"dataset", "small_2x3"}, {"method", "human"}, {"budget", budget}}.dump(), auth);
    REQUIRE(r.status == 201);
    return r.body["id"].get<std::string>();
}

json submission(std::size_t iteration, const std::string& cat, const std::string& solv) {
    return {{"iteration", iteration},
            {"assignment", {{"catalyst", cat}, {"solvent", solv}}},
            {"reasoning", {{"hypothesis", "THF helps"}}},
            {"author", "ada"}};
}

} // namespace

TEST_CASE("dataset registration is idempotent and conflicts are reported") {
    Service s;
    CHECK(s.create_dataset(small_manifest()).status == 201);
    CHECK(s.create_dataset(small_manifest()).status == 200);
    auto changed = json::parse(small_manifest());
    changed["rows"][0]["values"]["yield"] = 51.0;
    CHECK(s.create_dataset(changed.dump()).status == 409);

    const auto bad = s.create_dataset("{\n\"name\": \"x\",\n\"parameters\": 3\n}");
    CHECK(bad.status == 400);
    CHECK(bad.body["line"] == 3);

    const auto one = s.get_dataset("small_2x3");
    CHECK(one.status == 200);
    CHECK(one.body["cardinality"] == 6);
    CHECK(s.get_dataset("nope").status == 404);
    CHECK(s.list_datasets().body["datasets"].size() == 1);
}

TEST_CASE("campaign creation validates its fields") {
    Service s;
    s.create_dataset(small_manifest());
    CHECK(s.create_campaign("{").status == 400);
    CHECK(s.create_campaign(json{{"dataset", "missing"}, {"method", "random"}}.dump()).status == 404);
    const auto bad_method = s.create_campaign(json{{"dataset", "small_2x3"}, {"method", "simplex"}}.dump());
    CHECK(bad_method.status == 400);
    const auto too_big = s.create_campaign(json{{"dataset", "small_2x3"}, {"method", "random"}, {"budget", 7}}.dump());
    CHECK(too_big.status == 400);
    CHECK(s.get_campaign("c999999").status == 404);
    std::string text;
    CHECK(s.trajectory("c999999", text).status == 404);
    CHECK(s.leaderboard("").status == 400);
    CHECK(s.leaderboard("missing").status == 404);
}

TEST_CASE("human submissions follow the iteration protocol") {
    Service s;
    s.create_dataset(small_manifest());
    const auto id = human_campaign(s);

    const auto wrong = s.submit_suggestion(id, submission(2, "Pd", "THF").dump());
    CHECK(wrong.status == 409);
    CHECK(wrong.body["expected_iteration"] == 1);

    const auto unknown = s.submit_suggestion(id, submission(1, "Pd", "Toluene").dump());
    CHECK(unknown.status == 400);
    CHECK(unknown.body["valid_options"] == json::array({"DMF", "THF", "MeCN"}));

    CHECK(s.submit_suggestion(id, json{{"assignment", {{"catalyst", "Pd"}}}}.dump()).status == 400);

    const auto ok = s.submit_suggestion(id, submission(1, "Pd", "THF").dump());
    REQUIRE(ok.status == 200);
    CHECK(ok.body["remaining"] == 2);
    CHECK(ok.body["observations"][0]["value"] == 66.0);
    CHECK(s.publish(id).status == 409);

    CHECK(s.submit_suggestion(id, submission(2, "Ni", "DMF").dump()).status == 200);
    CHECK(s.submit_suggestion(id, submission(3, "Ni", "THF").dump()).status == 200);
    CHECK(s.submit_suggestion(id, submission(4, "Pd", "DMF").dump()).status == 409);

    const auto view = s.get_campaign(id);
    CHECK(view.body["status"] == "complete");
    CHECK(view.body["best"]["value"] == 66.0);
    CHECK(s.publish(id).status == 200);
    CHECK(s.publish(id).status == 200);

    std::string text;
    REQUIRE(s.trajectory(id, text).status == 200);
    const auto t = campaign::parse_trajectory(text);
    CHECK(t.iterations.size() == 3);
    CHECK(t.iterations[0].author == "ada");
    CHECK(t.iterations[0].reasoning.hypothesis == "THF helps");

    const auto board = s.leaderboard("small_2x3");
    REQUIRE(board.status == 200);
    CHECK(board.body["entries"].size() == 1);
    CHECK(board.body["entries"][0]["median_best"] == 66.0);
}

TEST_CASE("bearer tokens gate every write and name the author") {
    const auto dir = fresh_dir("tokens");
    {
        std::ofstream f(dir / "tokens.txt");
        f << "# token handle\nsecret-1 grace\n";
    }
    ServiceOptions o;
    o.token_file = dir / "tokens.txt";
    Service s(o);
    CHECK(s.create_dataset(small_manifest()).status == 401);
    CHECK(s.create_dataset(small_manifest(), "Bearer wrong").status == 401);
    CHECK(s.create_dataset(small_manifest(), "Bearer secret-1").status == 201);
    const auto id = human_campaign(s, 3, "Bearer secret-1");
    CHECK(s.submit_suggestion(id, submission(1, "Pd", "THF").dump()).status == 401);
    CHECK(s.submit_suggestion(id, submission(1, "Pd", "THF").dump(), "Bearer secret-1").status == 200);
    std::string text;
    s.trajectory(id, text);
    CHECK(campaign::parse_trajectory(text).iterations[0].author == "grace");
    CHECK(load_tokens(dir / "tokens.txt").at("secret-1") == "grace");
    fs::remove_all(dir);
}

TEST_CASE("machine campaigns run on the worker pool") {
    Service s;
    s.create_dataset(small_manifest());
    const auto r = s.create_campaign(json{{"dataset", "small_2x3"}, {"method", "random"}, {"budget", 6}, {"seed", 4}}.dump());
    REQUIRE(r.status == 201);
    s.wait_idle();
    const auto view = s.get_campaign(r.body["id"]);
    CHECK(view.body["status"] == "complete");
    CHECK(view.body["best"]["value"] == 66.0);
    CHECK(s.submit_suggestion(r.body["id"], submission(1, "Pd", "THF").dump()).status == 409);
}

TEST_CASE("state survives a restart, including a half-finished human campaign") {
    const auto dir = fresh_dir("persist");
    ServiceOptions o;
    o.data_dir = dir;
    o.snapshot_every = 3;
    std::string human, machine;
    std::string before;
    {
        Service s(o);
        s.create_dataset(small_manifest());
        human = human_campaign(s, 4);
        CHECK(s.submit_suggestion(human, submission(1, "Pd", "THF").dump()).status == 200);
        CHECK(s.submit_suggestion(human, submission(2, "Ni", "MeCN").dump()).status == 200);
        const auto m = s.create_campaign(json{{"dataset", "small_2x3"}, {"method", "random"}, {"budget", 3}}.dump());
        machine = m.body["id"];
        s.wait_idle();
        s.publish(machine);
        s.trajectory(human, before);
    }
    Service s(o);
    CHECK(s.get_dataset("small_2x3").status == 200);
    CHECK(s.create_dataset(small_manifest()).status == 200);
    std::string after;
    REQUIRE(s.trajectory(human, after).status == 200);
    CHECK(after == before);
    const auto view = s.get_campaign(human);
    CHECK(view.body["status"] == "running");
    CHECK(view.body["next_iteration"] == 3);
    CHECK(s.submit_suggestion(human, submission(3, "Pd", "DMF").dump()).status == 200);
    CHECK(s.get_campaign(machine).body["published"] == true);
    CHECK(s.leaderboard("small_2x3").body["entries"].size() == 1);

    const auto next = human_campaign(s);
    CHECK(next > machine);
    fs::remove_all(dir);
}

TEST_CASE("a torn final log line is ignored on load") {
    const auto dir = fresh_dir("torn");
    {
        ServiceOptions o;
        o.data_dir = dir;
        Service s(o);
        s.create_dataset(small_manifest());
    }
    {
        std::ofstream f(dir / "log.jsonl", std::ios::app);
        f << "{\"type\": \"campaign\", \"id\": ";
    }
    ServiceOptions o;
    o.data_dir = dir;
    Service s(o);
    CHECK(s.get_dataset("small_2x3").status == 200);
    fs::remove_all(dir);
}

TEST_CASE("HTTP routes mirror the API") {
    Service s;
    httplib::Server server;
    s.register_routes(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    httplib::Client c("127.0.0.1", port);

    CHECK(c.Post("/datasets", small_manifest(), "application/json")->status == 201);
    CHECK(c.Get("/datasets")->status == 200);
    CHECK(c.Get("/datasets/small_2x3")->status == 200);
    const auto created = c.Post("/campaigns", json{{"dataset", "small_2x3"}, {"method", "human"}, {"budget", 1}}.dump(),
                                "application/json");
    REQUIRE(created->status == 201);
    const std::string id = json::parse(created->body)["id"];
    CHECK(c.Post("/campaigns/" + id + "/suggestions", submission(1, "Pd", "THF").dump(), "application/json")->status == 200);
    CHECK(c.Post("/campaigns/" + id + "/publish", "", "application/json")->status == 200);
    const auto board = c.Get("/leaderboard?dataset=small_2x3");
    CHECK(board->status == 200);
    CHECK(json::parse(board->body)["entries"].size() == 1);
    const auto traj = c.Get("/trajectories/" + id);
    CHECK(traj->status == 200);
    CHECK(campaign::parse_trajectory(traj->body).run_id == id);
    CHECK(c.Get("/campaigns/" + id)->status == 200);
    CHECK(c.Get("/campaigns/zzz")->status == 404);

    server.stop();
    t.join();
}

TEST_CASE("leaderboard ranking follows the goal direction") {
    std::vector<LeaderboardEntry> e(3);
    e[0] = {"d", "a", "bo", 10.0, 9.0, 2, {}};
    e[1] = {"d", "b", "llm", 12.0, 8.0, 2, {}};
    e[2] = {"d", "c", "human", 10.0, 9.5, 2, {}};
    auto up = e;
    rank_entries(up, Goal::maximize);
    CHECK(up[0].method == "b");
    CHECK(up[1].method == "c");
    auto down = e;
    rank_entries(down, Goal::minimize);
    CHECK(down[0].method == "a");
    CHECK(down[2].method == "b");
}
