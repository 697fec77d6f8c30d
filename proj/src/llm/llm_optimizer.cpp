#include "catbench/llm/llm_optimizer.hpp"

#include <map>
#include <sstream>

namespace catbench::llm {

ParsedResponse parse_response(std::string_view text, const ParameterSpace& space, std::size_t batch_size) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ResponseFormatError(std::string("reply is not JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ResponseFormatError("reply is not a JSON object");

    ParsedResponse out;
    auto text_field = [&](const char* key, std::string& dst) {
        if (!j.contains(key))
            throw ResponseFormatError(std::string("reply lacks '") + key + "'");
        if (!j[key].is_string())
            throw ResponseFormatError(std::string("'") + key + "' must be a string");
        dst = j[key].get<std::string>();
    };
    text_field("analysis", out.analysis);
    text_field("hypothesis", out.hypothesis);
    text_field("reasoning", out.reasoning);

    if (!j.contains("suggestions") || !j["suggestions"].is_array())
        throw ResponseFormatError("reply lacks a 'suggestions' array");
    const auto& items = j["suggestions"];
    if (items.size() != batch_size)
        throw ResponseFormatError("expected " + std::to_string(batch_size) + " suggestions, got " +
                                  std::to_string(items.size()));
    for (const auto& item : items) {
        if (!item.is_object())
            throw ResponseFormatError("each suggestion must be an object");
        Assignment a;
        for (const auto& p : space.parameters()) {
            if (!item.contains(p.name) || !item[p.name].is_string())
                throw ResponseFormatError("suggestion lacks a string value for '" + p.name + "'");
            a.labels.push_back(item[p.name].get<std::string>());
        }
        out.validity.push_back(space.resolve(a) ? Validity::valid : Validity::invalid_option);
        out.assignments.push_back(std::move(a));
    }
    return out;
}

LLMOptimizer::LLMOptimizer(std::shared_ptr<Provider> provider, LLMOptions options, std::string label)
    : provider_(std::move(provider)), options_(std::move(options)), label_(std::move(label)) {
    if (!provider_)
        throw ConfigError("LLM optimizer needs a provider");
}

std::vector<ChatMessage> LLMOptimizer::build_messages(const OptimizerSession& session, std::size_t count) const {
    std::vector<ChatMessage> msgs;
    msgs.push_back({"system", generate_system_prompt(session.space(), session.objectives(), count)});
    if (!options_.context_documents.empty()) {
        std::ostringstream s;
        s << "Background material for this optimization:\n";
        for (std::size_t i = 0; i < options_.context_documents.size(); ++i)
            s << "\n--- document " << i + 1 << " ---\n" << options_.context_documents[i] << "\n";
        msgs.push_back({"user", s.str()});
    }
    msgs.push_back({"user", generate_iteration_prompt(session.space(), session.objectives(), session.history(),
                                                      options_.policy, count, session.remaining())});
    return msgs;
}

Suggestion LLMOptimizer::propose(OptimizerSession& session, std::size_t count) {
    ChatRequest req{build_messages(session, count), suggestion_schema(session.space(), count)};
    std::string last_problem;
    for (std::size_t attempt = 0; attempt <= options_.max_parse_retries; ++attempt) {
        std::string reply;
        try {
            reply = provider_->complete(req);
        } catch (const ProviderError& e) {
            throw CampaignAbort(std::string("provider failure: ") + e.what());
        }
        try {
            auto parsed = parse_response(reply, session.space(), count);
            Suggestion s;
            s.assignments = std::move(parsed.assignments);
            s.validity = std::move(parsed.validity);
            s.reasoning.analysis = std::move(parsed.analysis);
            s.reasoning.hypothesis = std::move(parsed.hypothesis);
            s.reasoning.rationale = std::move(parsed.reasoning);
            std::ostringstream rec;
            for (std::size_t i = 0; i < s.assignments.size(); ++i) {
                if (i)
                    rec << "\n";
                for (std::size_t p = 0; p < session.space().dimension(); ++p)
                    rec << (p ? ", " : "") << session.space().parameter(p).name << "=" << s.assignments[i].labels[p];
            }
            s.reasoning.recommendation = rec.str();
            return s;
        } catch (const ResponseFormatError& e) {
            ++parse_failures_;
            last_problem = e.what();
        }
    }
    throw CampaignAbort("malformed provider output after " + std::to_string(options_.max_parse_retries) +
                        " retries: " + last_problem);
}

std::size_t count_duplicates(std::span<const Assignment> suggestions) {
    std::map<Assignment, std::size_t> seen;
    for (const auto& a : suggestions)
        ++seen[a];
    std::size_t d = 0;
    for (const auto& [a, n] : seen)
        d += n >= 2;
    return d;
}

double invalid_rate(std::span<const Observation> observations) {
    if (observations.empty())
        return 0.0;
    std::size_t missing = 0;
    for (const auto& o : observations)
        missing += !o.has_value();
    return static_cast<double>(missing) / static_cast<double>(observations.size());
}

} // namespace catbench::llm
