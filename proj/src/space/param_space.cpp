#include "catbench/space/param_space.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace catbench {

ParameterSpace::ParameterSpace(std::vector<Parameter> parameters) : parameters_(std::move(parameters)) {
    if (parameters_.empty())
        throw ConfigError("parameter space needs at least one parameter");

    std::unordered_set<std::string> names;
    cardinality_ = 1;
    option_lookup_.reserve(parameters_.size());
    for (const auto& p : parameters_) {
        if (p.name.empty())
            throw ConfigError("parameter name must not be empty");
        if (!names.insert(p.name).second)
            throw ConfigError("duplicate parameter name '" + p.name + "'");
        if (p.options.size() < 2)
            throw ConfigError("parameter '" + p.name + "' needs at least 2 options");

        std::unordered_map<std::string, OptionIndex> lookup;
        for (std::size_t j = 0; j < p.options.size(); ++j) {
            if (!lookup.emplace(p.options[j], static_cast<OptionIndex>(j)).second)
                throw ConfigError("parameter '" + p.name + "' has duplicate option '" + p.options[j] + "'");
        }
        option_lookup_.push_back(std::move(lookup));

        if (cardinality_ > kMaxCardinality / p.options.size())
            throw ConfigError("parameter space is too large to enumerate");
        cardinality_ *= p.options.size();
    }
}

std::optional<std::size_t> ParameterSpace::find_parameter(std::string_view name) const {
    for (std::size_t i = 0; i < parameters_.size(); ++i)
        if (parameters_[i].name == name)
            return i;
    return std::nullopt;
}

std::optional<OptionIndex> ParameterSpace::find_option(std::size_t param, std::string_view label) const {
    const auto& lookup = option_lookup_.at(param);
    auto it = lookup.find(std::string(label));
    if (it == lookup.end())
        return std::nullopt;
    return it->second;
}

std::optional<OptionIndices> ParameterSpace::resolve(const Assignment& a) const {
    if (a.labels.size() != parameters_.size())
        throw StructuralError("assignment has " + std::to_string(a.labels.size()) + " labels, space has " +
                              std::to_string(parameters_.size()) + " parameters");
    OptionIndices idx(parameters_.size());
    for (std::size_t i = 0; i < parameters_.size(); ++i) {
        auto j = find_option(i, a.labels[i]);
        if (!j)
            return std::nullopt;
        idx[i] = *j;
    }
    return idx;
}

OptionIndices ParameterSpace::resolve_or_throw(const Assignment& a) const {
    if (auto idx = resolve(a))
        return *idx;
    for (std::size_t i = 0; i < parameters_.size(); ++i)
        if (!find_option(i, a.labels[i]))
            throw StructuralError("unknown option '" + a.labels[i] + "' for parameter '" + parameters_[i].name + "'");
    throw StructuralError("unresolvable assignment");
}

Assignment ParameterSpace::labels_of(std::span<const OptionIndex> idx) const {
    if (idx.size() != parameters_.size())
        throw StructuralError("index vector does not match the space dimension");
    Assignment a;
    a.labels.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        a.labels.push_back(parameters_[i].options.at(idx[i]));
    return a;
}

std::uint64_t ParameterSpace::flat_index(std::span<const OptionIndex> idx) const {
    if (idx.size() != parameters_.size())
        throw StructuralError("index vector does not match the space dimension");
    std::uint64_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= parameters_[i].options.size())
            throw StructuralError("option index out of range for parameter '" + parameters_[i].name + "'");
        flat = flat * parameters_[i].options.size() + idx[i];
    }
    return flat;
}

OptionIndices ParameterSpace::unflatten(std::uint64_t flat) const {
    if (flat >= cardinality_)
        throw StructuralError("flat index out of range");
    OptionIndices idx(parameters_.size());
    for (std::size_t i = parameters_.size(); i-- > 0;) {
        const auto n = parameters_[i].options.size();
        idx[i] = static_cast<OptionIndex>(flat % n);
        flat /= n;
    }
    return idx;
}

Assignment ParameterSpace::from_named(const std::map<std::string, std::string>& named) const {
    for (const auto& [name, _] : named)
        if (!find_parameter(name))
            throw StructuralError("unknown parameter '" + name + "'");
    Assignment a;
    a.labels.reserve(parameters_.size());
    for (const auto& p : parameters_) {
        auto it = named.find(p.name);
        if (it == named.end())
            throw StructuralError("assignment is missing parameter '" + p.name + "'");
        a.labels.push_back(it->second);
    }
    return a;
}

std::vector<OptionIndices> enumerate_space(const ParameterSpace& space) {
    std::vector<OptionIndices> out;
    out.reserve(space.cardinality());
    OptionIndices current(space.dimension(), 0);
    for (std::uint64_t n = 0; n < space.cardinality(); ++n) {
        out.push_back(current);
        // odometer increment, last parameter fastest
        for (std::size_t i = space.dimension(); i-- > 0;) {
            if (++current[i] < space.option_count(i))
                break;
            current[i] = 0;
        }
    }
    return out;
}

std::string_view to_string(Goal g) { return g == Goal::maximize ? "maximize" : "minimize"; }

Goal goal_from_string(std::string_view s) {
    if (s == "maximize" || s == "max")
        return Goal::maximize;
    if (s == "minimize" || s == "min")
        return Goal::minimize;
    throw ConfigError("unknown goal '" + std::string(s) + "'");
}

std::string_view to_string(AggregationMode m) {
    switch (m) {
    case AggregationMode::lower_bound: return "lower_bound";
    case AggregationMode::mean: return "mean";
    case AggregationMode::upper_bound: return "upper_bound";
    }
    return "lower_bound";
}

AggregationMode aggregation_mode_from_string(std::string_view s) {
    if (s == "lower_bound" || s == "lower" || s == "min")
        return AggregationMode::lower_bound;
    if (s == "mean")
        return AggregationMode::mean;
    if (s == "upper_bound" || s == "upper" || s == "max")
        return AggregationMode::upper_bound;
    throw ConfigError("unknown aggregation mode '" + std::string(s) + "'");
}

double weighted_selectivity(double desired, double undesired) {
    if (!(desired >= 0.0) || !(undesired >= 0.0))
        throw DomainError("weighted selectivity needs nonnegative yields");
    const double total = desired + undesired;
    if (total == 0.0)
        return 0.0;
    return desired / total * desired;
}

double measurement_scalar(const MeasurementVector& m, const AggregationPolicy& policy, std::size_t objective) {
    if (policy.selectivity) {
        if (m.size() < 2)
            throw DomainError("selectivity needs (desired, undesired) measurement pairs");
        return weighted_selectivity(m[0], m[1]);
    }
    if (objective >= m.size())
        throw DomainError("objective index out of range for measurement");
    return m[objective];
}

double aggregate_group(std::span<const MeasurementVector> group, const AggregationPolicy& policy,
                       std::size_t objective) {
    if (group.empty())
        throw DomainError("cannot aggregate an empty replicate group");
    std::vector<double> s;
    s.reserve(group.size());
    for (const auto& m : group)
        s.push_back(measurement_scalar(m, policy, objective));
    switch (policy.mode) {
    case AggregationMode::lower_bound: return *std::min_element(s.begin(), s.end());
    case AggregationMode::upper_bound: return *std::max_element(s.begin(), s.end());
    case AggregationMode::mean: return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    }
    return s.front();
}

} // namespace catbench
