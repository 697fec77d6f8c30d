#pragma once

#include "catbench/core/session.hpp"
#include "catbench/llm/prompt.hpp"
#include "catbench/llm/provider.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace catbench::llm {

inline constexpr std::size_t kMaxParseRetries = 2;

// The reply did not match the function schema closely enough to extract a
// batch (bad JSON, missing fields, wrong batch length). Retried, never charged
// against the budget.
class ResponseFormatError : public Error {
public:
    using Error::Error;
};

struct ParsedResponse {
    std::string analysis;
    std::string hypothesis;
    std::string reasoning;
    std::vector<Assignment> assignments;
    std::vector<Validity> validity; // valid or invalid_option; off_table is decided at lookup
};

ParsedResponse parse_response(std::string_view text, const ParameterSpace& space, std::size_t batch_size);

struct LLMOptions {
    std::vector<std::string> context_documents;
    AggregationPolicy policy{};
    std::size_t max_parse_retries = kMaxParseRetries;
};

class LLMOptimizer final : public Optimizer {
public:
    LLMOptimizer(std::shared_ptr<Provider> provider, LLMOptions options, std::string label = "llm");

    Suggestion propose(OptimizerSession& session, std::size_t count) override;
    std::string label() const override { return label_; }

    // Messages for the next call: system prompt, optional context documents,
    // then the iteration prompt.
    std::vector<ChatMessage> build_messages(const OptimizerSession& session, std::size_t count) const;

    std::size_t parse_failures() const noexcept { return parse_failures_; }

private:
    std::shared_ptr<Provider> provider_;
    LLMOptions options_;
    std::string label_;
    std::size_t parse_failures_ = 0;
};

// Distinct assignments suggested at least twice.
std::size_t count_duplicates(std::span<const Assignment> suggestions);

// Fraction of suggestions observed as the missing-marker; 0 for none.
double invalid_rate(std::span<const Observation> observations);

} // namespace catbench::llm
