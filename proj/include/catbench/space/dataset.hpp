#pragma once

#include "catbench/space/param_space.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace catbench {

// Lookup table from full assignments to replicate measurement vectors.
// Immutable once loaded; safe for concurrent reads.
class BenchmarkDataset {
public:
    using Table = std::map<std::uint64_t, std::vector<MeasurementVector>>;

    BenchmarkDataset() = default;
    BenchmarkDataset(std::string name, ParameterSpace space, std::vector<ObjectiveSpec> objectives,
                     std::string provenance = {}, bool selectivity = false);

    // Appends one replicate for the key. Throws StructuralError on a bad key
    // and DomainError on a wrong-sized or non-finite vector.
    void add_measurement(std::span<const OptionIndex> key, MeasurementVector values);

    const std::string& name() const noexcept { return name_; }
    const std::string& provenance() const noexcept { return provenance_; }
    const ParameterSpace& space() const noexcept { return space_; }
    const std::vector<ObjectiveSpec>& objectives() const noexcept { return objectives_; }
    const Table& table() const noexcept { return table_; }
    // Measurements are (desired, undesired) pairs; becomes the default policy flag.
    bool selectivity() const noexcept { return selectivity_; }
    AggregationPolicy default_policy(AggregationMode mode = AggregationMode::lower_bound) const {
        return AggregationPolicy{mode, selectivity_};
    }

    // Missing-marker for absent keys; StructuralError for unknown labels.
    Observation lookup(const Assignment& a) const;
    const std::vector<MeasurementVector>* find(std::span<const OptionIndex> key) const;

    // Direction of the reported scalar: maximize for selectivity, otherwise
    // the first objective's goal.
    Goal scalar_goal(const AggregationPolicy& policy) const;

    // One aggregated scalar per measured key, in key order.
    std::vector<double> aggregated_values(const AggregationPolicy& policy) const;
    // Best aggregated scalar over the whole table under scalar_goal.
    double best_aggregated(const AggregationPolicy& policy) const;

    // Throws ConfigError when the dataset violates a cross-field invariant
    // (no measurements, selectivity without two objectives, bad tolerance).
    void validate() const;

    friend bool operator==(const BenchmarkDataset&, const BenchmarkDataset&) = default;

private:
    std::string name_;
    std::string provenance_;
    ParameterSpace space_;
    std::vector<ObjectiveSpec> objectives_;
    bool selectivity_ = false;
    Table table_;
};

// True when `a` is strictly better than `b` under `goal`.
inline bool better(double a, double b, Goal goal) {
    return goal == Goal::maximize ? a > b : a < b;
}

} // namespace catbench
