#include "catbench/llm/provider.hpp"

#include "catbench/llm/prompt.hpp"
#include "catbench/space/dataset_io.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <thread>

namespace catbench::llm {

std::optional<std::string> LLMProviderConfig::effective_thinking_level() const {
    if (thinking_level)
        return thinking_level;
    if (!thinking_budget)
        return std::nullopt;
    std::optional<std::pair<std::string, std::size_t>> pick;
    for (const auto& [level, budget] : level_budgets)
        if (budget >= *thinking_budget && (!pick || budget < pick->second))
            pick = {level, budget};
    if (!pick)
        throw ConfigError("no thinking level allows a budget of " + std::to_string(*thinking_budget) + " tokens");
    return pick->first;
}

void LLMProviderConfig::validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0))
        throw ConfigError("temperature must lie in [0, 2]");
    if (max_output_tokens == 0 || max_output_tokens > kMaxOutputTokens)
        throw ConfigError("max_output_tokens must lie in [1, " + std::to_string(kMaxOutputTokens) + "]");
    if (thinking_budget && *thinking_budget > kMaxThinkingTokens)
        throw ConfigError("thinking_budget must not exceed " + std::to_string(kMaxThinkingTokens));
    if (retry.max_attempts == 0)
        throw ConfigError("retry.max_attempts must be at least 1");
    (void)effective_thinking_level();
}

LLMProviderConfig provider_config_from_json(const nlohmann::json& j) {
    LLMProviderConfig c;
    try {
        c.endpoint = j.value("endpoint", c.endpoint);
        c.model = j.value("model", c.model);
        c.temperature = j.value("temperature", c.temperature);
        const std::string scale = j.value("temperature_scale", std::string("standard"));
        if (scale == "standard")
            c.temperature_scale = TemperatureScale::standard;
        else if (scale == "halved")
            c.temperature_scale = TemperatureScale::halved;
        else
            throw ConfigError("temperature_scale must be 'standard' or 'halved'");
        c.max_output_tokens = j.value("max_output_tokens", c.max_output_tokens);
        if (j.contains("thinking_budget") && !j["thinking_budget"].is_null())
            c.thinking_budget = j["thinking_budget"].get<std::size_t>();
        if (j.contains("thinking_level") && !j["thinking_level"].is_null())
            c.thinking_level = j["thinking_level"].get<std::string>();
        if (j.contains("level_budgets"))
            c.level_budgets = j["level_budgets"].get<std::map<std::string, std::size_t>>();
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        if (j.contains("retry")) {
            const auto& r = j["retry"];
            c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
            c.retry.initial_backoff = std::chrono::milliseconds(
                r.value("initial_backoff_ms", static_cast<std::int64_t>(c.retry.initial_backoff.count())));
            c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
        }
        c.timeout = std::chrono::seconds(j.value("timeout_s", static_cast<std::int64_t>(c.timeout.count())));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("provider config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::ordered_json to_json(const LLMProviderConfig& c) {
    nlohmann::ordered_json j;
    j["endpoint"] = c.endpoint;
    j["model"] = c.model;
    j["temperature"] = c.temperature;
    j["temperature_scale"] = c.temperature_scale == TemperatureScale::halved ? "halved" : "standard";
    j["max_output_tokens"] = c.max_output_tokens;
    j["thinking_budget"] = c.thinking_budget ? nlohmann::ordered_json(*c.thinking_budget) : nullptr;
    j["thinking_level"] = c.thinking_level ? nlohmann::ordered_json(*c.thinking_level) : nullptr;
    j["api_key_env"] = c.api_key_env;
    j["retry"] = {{"max_attempts", c.retry.max_attempts},
                  {"initial_backoff_ms", c.retry.initial_backoff.count()},
                  {"multiplier", c.retry.multiplier}};
    return j;
}

MockProvider::MockProvider(nlohmann::json script) {
    if (script.is_object() && script.contains("responses"))
        script = script["responses"];
    if (!script.is_array())
        throw ConfigError("mock script must be {\"responses\": [...]} or an array");
    for (auto& r : script)
        responses_.push_back(std::move(r));
}

MockProvider MockProvider::from_file(const std::filesystem::path& path) {
    try {
        return MockProvider(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("mock script " + path.string() + ": " + e.what());
    }
}

std::string MockProvider::complete(const ChatRequest& request) {
    requests_.push_back(request);
    if (next_ >= responses_.size())
        throw ProviderError("mock script exhausted after " + std::to_string(responses_.size()) + " responses");
    const auto& r = responses_[next_++];
    if (r.is_object() && r.size() == 1 && r.contains("error"))
        throw ProviderError(r["error"].is_string() ? r["error"].get<std::string>() : r["error"].dump());
    if (r.is_object() && r.size() == 1 && r.contains("raw") && r["raw"].is_string())
        return r["raw"].get<std::string>();
    return r.dump();
}

void RequestGate::acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < capacity_; });
    ++in_flight_;
}

void RequestGate::release() {
    {
        std::lock_guard lock(mu_);
        --in_flight_;
    }
    cv_.notify_one();
}

void RequestGate::set_capacity(std::size_t capacity) {
    {
        std::lock_guard lock(mu_);
        capacity_ = std::max<std::size_t>(1, capacity);
    }
    cv_.notify_all();
}

std::size_t RequestGate::in_flight() const {
    std::lock_guard lock(mu_);
    return in_flight_;
}

RequestGate& RequestGate::shared() {
    static RequestGate gate;
    return gate;
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, std::size_t attempt) {
    const double ms = static_cast<double>(policy.initial_backoff.count()) * std::pow(policy.multiplier, attempt);
    return std::chrono::milliseconds(static_cast<std::int64_t>(std::min(ms, 60000.0)));
}

HttpChatProvider::HttpChatProvider(LLMProviderConfig config, RequestGate* gate)
    : config_(std::move(config)), gate_(gate) {
    config_.validate();
}

nlohmann::ordered_json HttpChatProvider::request_body(const ChatRequest& request) const {
    nlohmann::ordered_json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::ordered_json::array();
    for (const auto& m : request.messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = config_.effective_temperature();
    body["max_tokens"] = config_.max_output_tokens;
    if (auto level = config_.effective_thinking_level())
        body["reasoning_effort"] = *level;
    body["tools"] = nlohmann::ordered_json::array(
        {{{"type", "function"},
          {"function",
           {{"name", kSuggestToolName},
            {"description", "Record the analysis, hypothesis, reasoning and the next batch of experiments."},
            {"parameters", request.schema}}}}});
    body["tool_choice"] = {{"type", "function"}, {"function", {{"name", kSuggestToolName}}}};
    return body;
}

std::string HttpChatProvider::extract_arguments(const nlohmann::json& response) {
    const auto& choices = response.at("choices");
    if (!choices.is_array() || choices.empty())
        throw ProviderError("response has no choices");
    const auto& message = choices[0].at("message");
    if (message.contains("tool_calls") && message["tool_calls"].is_array() && !message["tool_calls"].empty()) {
        const auto& args = message["tool_calls"][0].at("function").at("arguments");
        return args.is_string() ? args.get<std::string>() : args.dump();
    }
    if (message.contains("content") && message["content"].is_string())
        return message["content"].get<std::string>();
    return {};
}

std::string HttpChatProvider::complete(const ChatRequest& request) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint must include a scheme: " + config_.endpoint);
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    const std::string origin = config_.endpoint.substr(0, path_start);
    std::string base_path = path_start == std::string::npos ? "" : config_.endpoint.substr(path_start);
    while (!base_path.empty() && base_path.back() == '/')
        base_path.pop_back();

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);
    const std::string body = request_body(request).dump();

    std::string last_error;
    for (std::size_t attempt = 0; attempt < config_.retry.max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(backoff_delay(config_.retry, attempt - 1));
        httplib::Result res;
        {
            RequestGate::Lease lease(*gate_);
            httplib::Client client(origin);
            client.set_connection_timeout(std::chrono::seconds(30));
            client.set_read_timeout(config_.timeout);
            res = client.Post(base_path + "/chat/completions", headers, body, "application/json");
        }
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw ProviderError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
        try {
            return extract_arguments(nlohmann::json::parse(res->body));
        } catch (const nlohmann::json::exception& e) {
            // An unreadable envelope is handed on as text so the caller's
            // parse-retry policy applies.
            return res->body;
        }
    }
    throw ProviderError("provider unreachable after " + std::to_string(config_.retry.max_attempts) +
                        " attempts: " + last_error);
}

} // namespace catbench::llm
