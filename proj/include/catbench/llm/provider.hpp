#pragma once

#include "catbench/error.hpp"

#include <json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace catbench::llm {

inline constexpr double kStandardTemperature = 0.7;
inline constexpr std::size_t kMaxOutputTokens = 8192;
inline constexpr std::size_t kMaxThinkingTokens = 4096;
inline constexpr std::size_t kDefaultConcurrentRequests = 4;

// Transport-level failure (unreachable host, rate limit after backoff,
// unusable HTTP status). The optimizer turns it into CampaignAbort.
class ProviderError : public Error {
public:
    using Error::Error;
};

// halved maps the 0-2 temperature range onto 0-1 for vendors that use it.
enum class TemperatureScale { standard, halved };

struct RetryPolicy {
    std::size_t max_attempts = 5;
    std::chrono::milliseconds initial_backoff{500};
    double multiplier = 2.0;
};

struct LLMProviderConfig {
    std::string endpoint = "https://api.openai.com/v1";
    std::string model;
    double temperature = kStandardTemperature;
    TemperatureScale temperature_scale = TemperatureScale::standard;
    std::size_t max_output_tokens = kMaxOutputTokens;
    std::optional<std::size_t> thinking_budget;
    std::optional<std::string> thinking_level; // "low", "medium", ...
    // Largest budget each level allows; used to map a token budget to a level.
    std::map<std::string, std::size_t> level_budgets{{"low", 1024}, {"medium", 2048}, {"high", 4096}};
    std::string api_key_env = "OPENAI_API_KEY";
    RetryPolicy retry;
    std::chrono::seconds timeout{120};

    double effective_temperature() const {
        return temperature_scale == TemperatureScale::halved ? temperature / 2.0 : temperature;
    }
    // Level sent as reasoning_effort, if any.
    std::optional<std::string> effective_thinking_level() const;
    // Throws ConfigError.
    void validate() const;
};

LLMProviderConfig provider_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const LLMProviderConfig& c);

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    nlohmann::ordered_json schema; // function parameters
};

// A chat-completion backend. complete() returns the raw text of the
// function-call arguments (or message content when no call was made).
class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

// Replays a scripted list of responses, one per call. Script format:
//   {"responses": [ <entry>, ... ]}
// where an entry is either a function-call argument object, {"raw": "<text>"}
// for a verbatim (possibly malformed) reply, or {"error": "<message>"} for a
// transport failure. Running past the end is a transport failure.
class MockProvider final : public Provider {
public:
    explicit MockProvider(nlohmann::json script);
    static MockProvider from_file(const std::filesystem::path& path);

    std::string complete(const ChatRequest& request) override;
    std::string name() const override { return "mock"; }

    std::size_t calls() const noexcept { return next_; }
    const std::vector<ChatRequest>& requests() const noexcept { return requests_; }

private:
    std::vector<nlohmann::json> responses_;
    std::size_t next_ = 0;
    std::vector<ChatRequest> requests_;
};

// Bounds in-flight requests across every provider in the process.
class RequestGate {
public:
    explicit RequestGate(std::size_t capacity = kDefaultConcurrentRequests) : capacity_(capacity) {}
    void acquire();
    void release();
    void set_capacity(std::size_t capacity);
    std::size_t in_flight() const;

    class Lease {
    public:
        explicit Lease(RequestGate& g) : gate_(g) { gate_.acquire(); }
        ~Lease() { gate_.release(); }
        Lease(const Lease&) = delete;
        Lease& operator=(const Lease&) = delete;

    private:
        RequestGate& gate_;
    };

    static RequestGate& shared();

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::size_t capacity_;
    std::size_t in_flight_ = 0;
};

// OpenAI-style POST {endpoint}/chat/completions with a forced function call.
class HttpChatProvider final : public Provider {
public:
    explicit HttpChatProvider(LLMProviderConfig config, RequestGate* gate = &RequestGate::shared());

    std::string complete(const ChatRequest& request) override;
    std::string name() const override { return config_.model; }

    nlohmann::ordered_json request_body(const ChatRequest& request) const;
    // Function-call arguments, falling back to message content.
    static std::string extract_arguments(const nlohmann::json& response);

private:
    LLMProviderConfig config_;
    RequestGate* gate_;
};

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, std::size_t attempt);

} // namespace catbench::llm
