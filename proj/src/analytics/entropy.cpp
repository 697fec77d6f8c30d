#include "catbench/analytics/entropy.hpp"

#include "catbench/error.hpp"

#include <cmath>
#include <numeric>

namespace catbench::analytics {

SelectionCounts selection_counts(const ParameterSpace& space, std::span<const Assignment> suggestions) {
    SelectionCounts c;
    c.totals.assign(space.dimension(), 0);
    for (std::size_t i = 0; i < space.dimension(); ++i)
        c.counts.emplace_back(space.option_count(i), 0);
    for (const auto& a : suggestions) {
        for (std::size_t i = 0; i < space.dimension() && i < a.labels.size(); ++i) {
            if (auto j = space.find_option(i, a.labels[i])) {
                ++c.counts[i][*j];
                ++c.totals[i];
            }
        }
    }
    return c;
}

double normalized_entropy(std::span<const std::size_t> counts, std::size_t total) {
    if (std::accumulate(counts.begin(), counts.end(), std::size_t{0}) != total)
        throw DomainError("selection counts do not sum to the iteration total");
    if (counts.size() <= 1 || total == 0)
        return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0)
            continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return std::max(0.0, h / std::log2(static_cast<double>(counts.size())));
}

std::vector<double> parameter_entropies(const SelectionCounts& c) {
    std::vector<double> h;
    for (std::size_t i = 0; i < c.counts.size(); ++i)
        h.push_back(normalized_entropy(c.counts[i], c.totals[i]));
    return h;
}

double cumulative_entropy(const SelectionCounts& c) {
    const auto h = parameter_entropies(c);
    if (h.empty())
        return 0.0;
    return std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(h.size());
}

EntropyReport entropy_report(const campaign::Trajectory& t) {
    EntropyReport r;
    r.run_id = t.run_id;
    r.method = t.method;
    r.dataset = t.dataset;
    for (const auto& p : t.space.parameters())
        r.parameters.push_back(p.name);
    const auto assignments = t.assignments();
    const auto counts = selection_counts(t.space, assignments);
    r.per_parameter = parameter_entropies(counts);
    r.cumulative = cumulative_entropy(counts);
    if (auto best = t.best()) {
        r.best_value = best->first;
        r.best_position = best->second + 1;
        std::span<const Assignment> prefix(assignments.data(), best->second + 1);
        r.entropy_to_best = cumulative_entropy(selection_counts(t.space, prefix));
    }
    return r;
}

std::optional<std::size_t> convergence_iteration(std::span<const std::optional<double>> values, double fraction,
                                                 double reference_max) {
    const double threshold = fraction * reference_max;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] && *values[i] > threshold)
            return i + 1;
    return std::nullopt;
}

std::optional<std::size_t> convergence_iteration(const campaign::Trajectory& t, double fraction,
                                                 double reference_max) {
    const double threshold = fraction * reference_max;
    for (const auto& it : t.iterations)
        for (const auto& s : it.suggestions)
            if (s.value && *s.value > threshold)
                return it.index;
    return std::nullopt;
}

} // namespace catbench::analytics
