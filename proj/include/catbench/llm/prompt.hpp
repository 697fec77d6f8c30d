#pragma once

#include "catbench/core/session.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace catbench::llm {

inline constexpr const char* kSuggestToolName = "suggest_experiments";

struct PromptBundle {
    std::string system_prompt;
    std::string iteration_prompt;
    // Sent as the first user message, never inside the system prompt.
    std::vector<std::string> context_documents;
};

std::string generate_system_prompt(const ParameterSpace& space, const std::vector<ObjectiveSpec>& objectives,
                                   std::size_t batch_size);

// Escapes '|' and '\' so a label can sit inside a table cell.
std::string escape_cell(std::string_view text);

// Numbers with two decimals, "nan" for missing values.
std::string format_value(double v);

// One line per experiment: index, labels, every replicate per objective
// (semicolon separated), aggregated value, status.
std::string render_history(const ParameterSpace& space, const std::vector<ObjectiveSpec>& objectives,
                           std::span<const HistoryEntry> history, const AggregationPolicy& policy);

std::string generate_iteration_prompt(const ParameterSpace& space, const std::vector<ObjectiveSpec>& objectives,
                                      std::span<const HistoryEntry> history, const AggregationPolicy& policy,
                                      std::size_t batch_size, std::size_t remaining_budget);

// JSON schema for the function-calling constraint: the three text fields and
// `suggestions`, an array of exactly batch_size objects with one enum field
// per parameter.
nlohmann::ordered_json suggestion_schema(const ParameterSpace& space, std::size_t batch_size);

} // namespace catbench::llm
