#pragma once

#include "catbench/campaign/campaign.hpp"
#include "catbench/core/human_optimizer.hpp"
#include "catbench/service/leaderboard.hpp"

#include <json.hpp>

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace catbench::service {

struct ServiceOptions {
    std::filesystem::path data_dir;   // empty: in-memory only
    std::filesystem::path token_file; // empty: no auth, authors come from the request body
    std::filesystem::path assets_dir; // optional static files served at /
    std::size_t workers = 2;          // machine campaigns run on this pool
    std::size_t snapshot_every = 64;  // log events between snapshots
};

struct ApiResult {
    int status = 200;
    nlohmann::ordered_json body;
};

// Bearer tokens: one "token handle" pair per line, '#' starts a comment.
std::map<std::string, std::string> load_tokens(const std::filesystem::path& path);

// Append-only event log plus periodic snapshot in a data directory.
class Store {
public:
    explicit Store(std::filesystem::path dir);
    bool enabled() const noexcept { return !dir_.empty(); }
    // Snapshot first, then the log events written after it.
    std::vector<nlohmann::ordered_json> load() const;
    void append(const nlohmann::ordered_json& event);
    void write_snapshot(const std::vector<nlohmann::ordered_json>& events);

private:
    std::filesystem::path dir_;
    std::mutex mu_;
};

class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // `auth` is the raw Authorization header value (may be empty).
    ApiResult create_dataset(const std::string& body, const std::string& auth = {});
    ApiResult list_datasets() const;
    ApiResult get_dataset(const std::string& id) const;
    ApiResult create_campaign(const std::string& body, const std::string& auth = {});
    ApiResult get_campaign(const std::string& id) const;
    ApiResult submit_suggestion(const std::string& id, const std::string& body, const std::string& auth = {});
    ApiResult publish(const std::string& id, const std::string& auth = {});
    ApiResult leaderboard(const std::string& dataset) const;
    // Trajectory document as text, same schema as the CLI's run output.
    ApiResult trajectory(const std::string& id, std::string& text) const;

    // Blocks until every queued machine campaign has finished.
    void wait_idle();

    void register_routes(httplib::Server& server);

private:
    struct Campaign {
        std::string id;
        std::string dataset;
        campaign::Modality modality = campaign::Modality::random;
        nlohmann::ordered_json request;
        std::unique_ptr<campaign::CampaignRun> run; // live runs only
        HumanOptimizer* human = nullptr;
        std::atomic<bool> published{false};
        mutable std::mutex mu; // serializes mutation of this campaign
        mutable std::mutex view_mu;
        std::shared_ptr<const campaign::Trajectory> view; // latest snapshot for readers
    };

    std::optional<std::string> authenticate(const std::string& auth, ApiResult& error) const;
    std::shared_ptr<Campaign> find(const std::string& id) const;
    std::shared_ptr<const campaign::Trajectory> view_of(const Campaign& c) const;
    void refresh_view(Campaign& c);
    nlohmann::ordered_json campaign_event(const Campaign& c) const;
    void record(const nlohmann::ordered_json& event);
    void restore();
    void restore_campaign(const nlohmann::ordered_json& event);
    campaign::CampaignConfig build_config(const nlohmann::json& request, std::string& field_error) const;
    void enqueue(std::shared_ptr<Campaign> c);
    void worker_loop();
    void run_machine(Campaign& c);

    ServiceOptions options_;
    Store store_;
    std::map<std::string, std::string> tokens_;

    mutable std::mutex mu_; // datasets_, campaigns_, counter_
    std::map<std::string, std::shared_ptr<const BenchmarkDataset>> datasets_;
    std::map<std::string, std::string> dataset_manifests_;
    std::map<std::string, std::shared_ptr<Campaign>> campaigns_;
    std::size_t counter_ = 0;
    std::size_t events_since_snapshot_ = 0;
    std::mutex log_mu_;

    std::mutex queue_mu_;
    std::condition_variable queue_cv_;
    std::condition_variable idle_cv_;
    std::deque<std::shared_ptr<Campaign>> queue_;
    std::size_t active_ = 0;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

// Blocking HTTP server on host:port.
int serve(ServiceOptions options, const std::string& host, int port);

} // namespace catbench::service
