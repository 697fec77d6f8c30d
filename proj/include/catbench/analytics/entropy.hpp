#pragma once

#include "catbench/campaign/trajectory.hpp"

#include <optional>
#include <span>
#include <vector>

namespace catbench::analytics {

// c_ij: how often option j of parameter i was chosen. totals[i] is T for
// parameter i: suggestions whose label for i is a declared option. Labels
// outside the option list contribute nothing for that parameter.
struct SelectionCounts {
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> totals;
};

SelectionCounts selection_counts(const ParameterSpace& space, std::span<const Assignment> suggestions);

// -sum P log2 P / log2 n with P = c / total. 0 for n = 1 or total = 0.
// Throws DomainError when the counts do not sum to total.
double normalized_entropy(std::span<const std::size_t> counts, std::size_t total);

std::vector<double> parameter_entropies(const SelectionCounts& c);
// Unweighted mean over parameters.
double cumulative_entropy(const SelectionCounts& c);

struct EntropyReport {
    std::string run_id;
    std::string method;
    std::string dataset;
    std::vector<std::string> parameters;
    std::vector<double> per_parameter;
    double cumulative = 0.0;
    // Over the prefix ending at the first occurrence of the best value.
    std::optional<double> entropy_to_best;
    std::optional<double> best_value;
    std::optional<std::size_t> best_position; // 1-based suggestion number
};

EntropyReport entropy_report(const campaign::Trajectory& t);

// Smallest 1-based position whose value exceeds fraction * reference_max.
std::optional<std::size_t> convergence_iteration(std::span<const std::optional<double>> values, double fraction,
                                                 double reference_max);
// Same on a trajectory, reported as the iteration index of the record.
std::optional<std::size_t> convergence_iteration(const campaign::Trajectory& t, double fraction, double reference_max);

} // namespace catbench::analytics
