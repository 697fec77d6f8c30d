#include "catbench/llm/prompt.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace catbench::llm {

std::string generate_system_prompt(const ParameterSpace& space, const std::vector<ObjectiveSpec>& objectives,
                                   std::size_t batch_size) {
    std::ostringstream s;
    s << "You are an expert experimental chemist optimizing a reaction. Each iteration you receive the full "
         "history of experiments and propose the next batch.\n\n";
    s << "## Parameter space\n";
    s << "All parameters are categorical. Use only the listed option labels, spelled exactly.\n";
    for (const auto& p : space.parameters()) {
        s << "- " << p.name << " (categorical, " << p.options.size() << " options):\n";
        for (const auto& o : p.options)
            s << "  - " << o << "\n";
    }
    s << "\n## Objectives\n";
    for (std::size_t k = 0; k < objectives.size(); ++k) {
        s << "- " << objectives[k].name << ": " << to_string(objectives[k].goal);
        if (objectives.size() > 1)
            s << " (priority " << k + 1 << ")";
        s << "\n";
    }
    s << "\n## Batch size\n";
    s << "Suggest exactly " << batch_size << " parameter combination" << (batch_size == 1 ? "" : "s")
      << " per iteration.\n";
    s << "\n## Key guidelines\n";
    s << "1. Avoid infeasible experiments: every value must come from the option lists above.\n";
    s << "2. Minimize the number of experiments needed to reach the best outcome.\n";
    s << "3. Never suggest a parameter combination that has already been tested.\n";
    s << "4. Consider the physical and chemical meaning of the observed data.\n";
    s << "\n## Response protocol\n";
    s << "Call the " << kSuggestToolName << " function with:\n";
    s << "1. analysis: analyze trends in the observed data.\n";
    s << "2. hypothesis: form a hypothesis about the important factors.\n";
    s << "3. reasoning: give explicit reasoning for the next suggestion.\n";
    s << "4. suggestions: recommend a batch of " << batch_size << " combination" << (batch_size == 1 ? "" : "s")
      << " to test.\n";
    return s.str();
}

std::string escape_cell(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '|' || c == '\\')
            out += '\\';
        if (c == '\n')
            out += "\\n";
        else if (c == '\r')
            out += "\\r";
        else
            out += c;
    }
    return out;
}

std::string format_value(double v) {
    if (!std::isfinite(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

namespace {

std::string status_text(Validity v) {
    switch (v) {
    case Validity::valid: return "ok";
    case Validity::invalid_option: return "infeasible: invalid option";
    case Validity::off_table: return "infeasible: not measured";
    }
    return "ok";
}

} // namespace

std::string render_history(const ParameterSpace& space, const std::vector<ObjectiveSpec>& objectives,
                           std::span<const HistoryEntry> history, const AggregationPolicy& policy) {
    std::ostringstream s;
    s << "| # |";
    for (const auto& p : space.parameters())
        s << " " << escape_cell(p.name) << " |";
    for (const auto& o : objectives)
        s << " " << escape_cell(o.name) << " |";
    s << " aggregated | status |\n";
    s << "|---|";
    for (std::size_t i = 0; i < space.dimension() + objectives.size() + 2; ++i)
        s << "---|";
    s << "\n";
    std::size_t n = 0;
    for (const auto& h : history) {
        s << "| " << ++n << " |";
        for (const auto& l : h.assignment.labels)
            s << " " << escape_cell(l) << " |";
        for (std::size_t k = 0; k < objectives.size(); ++k) {
            s << " ";
            if (!h.observation || h.observation->empty()) {
                s << "nan";
            } else {
                for (std::size_t r = 0; r < h.observation->size(); ++r)
                    s << (r ? "; " : "") << format_value((*h.observation)[r].at(k));
            }
            s << " |";
        }
        s << " ";
        if (!h.observation || h.observation->empty())
            s << "nan";
        else
            s << format_value(aggregate_group(*h.observation, policy));
        s << " | " << status_text(h.validity) << " |\n";
    }
    return s.str();
}

std::string generate_iteration_prompt(const ParameterSpace& space, const std::vector<ObjectiveSpec>& objectives,
                                      std::span<const HistoryEntry> history, const AggregationPolicy& policy,
                                      std::size_t batch_size, std::size_t remaining_budget) {
    std::ostringstream s;
    s << "## Experiment history (" << history.size() << " experiment" << (history.size() == 1 ? "" : "s")
      << ")\n";
    if (history.empty())
        s << "No experiments have been run yet.\n";
    else
        s << render_history(space, objectives, history, policy);
    s << "\nAggregation of replicate measurements: " << to_string(policy.mode)
      << (policy.selectivity ? " of weighted selectivity" : "") << ".\n";
    s << "Remaining budget: " << remaining_budget << " experiment" << (remaining_budget == 1 ? "" : "s") << ".\n";
    s << "\nFollow the response protocol: analyze the data, state a hypothesis, give your reasoning, then "
         "recommend "
      << batch_size << " new combination" << (batch_size == 1 ? "" : "s") << " by calling " << kSuggestToolName
      << ".\n";
    return s.str();
}

nlohmann::ordered_json suggestion_schema(const ParameterSpace& space, std::size_t batch_size) {
    using nlohmann::ordered_json;
    ordered_json item = {{"type", "object"}, {"properties", ordered_json::object()}, {"required", ordered_json::array()}};
    for (const auto& p : space.parameters()) {
        item["properties"][p.name] = {{"type", "string"}, {"enum", p.options}};
        item["required"].push_back(p.name);
    }
    item["additionalProperties"] = false;
    ordered_json schema = {
        {"type", "object"},
        {"properties",
         {{"analysis", {{"type", "string"}, {"description", "Trends in the observed data."}}},
          {"hypothesis", {{"type", "string"}, {"description", "Hypothesis about the important factors."}}},
          {"reasoning", {{"type", "string"}, {"description", "Explicit reasoning for the next suggestion."}}},
          {"suggestions",
           {{"type", "array"}, {"minItems", batch_size}, {"maxItems", batch_size}, {"items", item}}}}},
        {"required", {"analysis", "hypothesis", "reasoning", "suggestions"}},
        {"additionalProperties", false}};
    return schema;
}

} // namespace catbench::llm
