#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace catbench {

using OptionIndex = std::uint32_t;
using OptionIndices = std::vector<OptionIndex>;

struct Parameter {
    std::string name;
    std::vector<std::string> options;

    friend bool operator==(const Parameter&, const Parameter&) = default;
};

// One label per parameter, in parameter order. Labels are opaque and kept
// byte-exact; they may name options that do not exist when an LLM escapes
// its output schema, so an Assignment is not necessarily resolvable.
struct Assignment {
    std::vector<std::string> labels;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

// Finite categorical parameter space. Immutable after construction.
class ParameterSpace {
public:
    static constexpr std::uint64_t kMaxCardinality = std::uint64_t{1} << 26;

    ParameterSpace() = default;
    explicit ParameterSpace(std::vector<Parameter> parameters);

    std::size_t dimension() const noexcept { return parameters_.size(); }
    const std::vector<Parameter>& parameters() const noexcept { return parameters_; }
    const Parameter& parameter(std::size_t i) const { return parameters_.at(i); }
    std::size_t option_count(std::size_t i) const { return parameters_.at(i).options.size(); }
    std::uint64_t cardinality() const noexcept { return cardinality_; }

    std::optional<std::size_t> find_parameter(std::string_view name) const;
    std::optional<OptionIndex> find_option(std::size_t param, std::string_view label) const;

    // nullopt when any label is not a declared option. Throws StructuralError
    // when the label count does not match the dimension.
    std::optional<OptionIndices> resolve(const Assignment& a) const;
    // Throws StructuralError naming the first unknown label.
    OptionIndices resolve_or_throw(const Assignment& a) const;

    Assignment labels_of(std::span<const OptionIndex> idx) const;

    // Mixed-radix index; the first parameter is the most significant digit.
    std::uint64_t flat_index(std::span<const OptionIndex> idx) const;
    OptionIndices unflatten(std::uint64_t flat) const;

    // Builds an assignment from name -> label pairs. Every parameter must be
    // present and no other names are allowed. Labels are not checked.
    Assignment from_named(const std::map<std::string, std::string>& named) const;

    friend bool operator==(const ParameterSpace& a, const ParameterSpace& b) {
        return a.parameters_ == b.parameters_;
    }

private:
    std::vector<Parameter> parameters_;
    std::vector<std::unordered_map<std::string, OptionIndex>> option_lookup_;
    std::uint64_t cardinality_ = 0;
};

// All assignments in lexicographic (parameter, option) order.
std::vector<OptionIndices> enumerate_space(const ParameterSpace& space);

enum class Goal { maximize, minimize };

inline constexpr double kDefaultRelativeTolerance = 0.3;

struct ObjectiveSpec {
    std::string name;
    Goal goal = Goal::maximize;
    // Chimera relative tolerance, in [0, 1].
    double tolerance = kDefaultRelativeTolerance;

    friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

std::string_view to_string(Goal g);
Goal goal_from_string(std::string_view s);

using MeasurementVector = std::vector<double>;

// All replicate measurements for a key; std::nullopt is the missing-marker.
using Observation = std::optional<std::vector<MeasurementVector>>;

enum class AggregationMode { lower_bound, mean, upper_bound };

struct AggregationPolicy {
    AggregationMode mode = AggregationMode::lower_bound;
    // Measurements are (desired, undesired) yield pairs reduced by
    // weighted_selectivity before the mode is applied.
    bool selectivity = false;

    friend bool operator==(const AggregationPolicy&, const AggregationPolicy&) = default;
};

std::string_view to_string(AggregationMode m);
AggregationMode aggregation_mode_from_string(std::string_view s);

// (desired / (desired + undesired)) * desired, and 0 when both are 0.
double weighted_selectivity(double desired, double undesired);

// Scalar for one measurement: the selectivity when the policy asks for it,
// otherwise the value of `objective`.
double measurement_scalar(const MeasurementVector& m, const AggregationPolicy& policy,
                          std::size_t objective = 0);

double aggregate_group(std::span<const MeasurementVector> group, const AggregationPolicy& policy,
                       std::size_t objective = 0);

} // namespace catbench
