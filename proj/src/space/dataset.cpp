#include "catbench/space/dataset.hpp"

#include "catbench/error.hpp"

#include <cmath>
#include <unordered_set>

namespace catbench {

BenchmarkDataset::BenchmarkDataset(std::string name, ParameterSpace space, std::vector<ObjectiveSpec> objectives,
                                   std::string provenance, bool selectivity)
    : name_(std::move(name)), provenance_(std::move(provenance)), space_(std::move(space)),
      objectives_(std::move(objectives)), selectivity_(selectivity) {
    if (objectives_.empty())
        throw ConfigError("dataset needs at least one objective");
    std::unordered_set<std::string> names;
    for (const auto& o : objectives_) {
        if (o.name.empty())
            throw ConfigError("objective name must not be empty");
        if (!names.insert(o.name).second)
            throw ConfigError("duplicate objective name '" + o.name + "'");
        if (!(o.tolerance >= 0.0 && o.tolerance <= 1.0))
            throw ConfigError("objective '" + o.name + "' tolerance must lie in [0, 1]");
    }
    if (selectivity_ && objectives_.size() < 2)
        throw ConfigError("selectivity datasets need (desired, undesired) objectives");
}

void BenchmarkDataset::add_measurement(std::span<const OptionIndex> key, MeasurementVector values) {
    const auto flat = space_.flat_index(key);
    if (values.size() != objectives_.size())
        throw DomainError("measurement has " + std::to_string(values.size()) + " values, dataset has " +
                          std::to_string(objectives_.size()) + " objectives");
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError("measurement values must be finite");
    table_[flat].push_back(std::move(values));
}

Observation BenchmarkDataset::lookup(const Assignment& a) const {
    const auto idx = space_.resolve_or_throw(a);
    if (const auto* group = find(idx))
        return *group;
    return std::nullopt;
}

const std::vector<MeasurementVector>* BenchmarkDataset::find(std::span<const OptionIndex> key) const {
    auto it = table_.find(space_.flat_index(key));
    return it == table_.end() ? nullptr : &it->second;
}

Goal BenchmarkDataset::scalar_goal(const AggregationPolicy& policy) const {
    return policy.selectivity ? Goal::maximize : objectives_.front().goal;
}

std::vector<double> BenchmarkDataset::aggregated_values(const AggregationPolicy& policy) const {
    std::vector<double> out;
    out.reserve(table_.size());
    for (const auto& [_, group] : table_)
        out.push_back(aggregate_group(group, policy));
    return out;
}

double BenchmarkDataset::best_aggregated(const AggregationPolicy& policy) const {
    if (table_.empty())
        throw ConfigError("dataset '" + name_ + "' has no measurements");
    const Goal goal = scalar_goal(policy);
    const auto values = aggregated_values(policy);
    double best = values.front();
    for (double v : values)
        if (better(v, best, goal))
            best = v;
    return best;
}

void BenchmarkDataset::validate() const {
    if (table_.empty())
        throw ConfigError("dataset '" + name_ + "' has no measurements");
    if (selectivity_) {
        for (const auto& [_, group] : table_)
            for (const auto& m : group)
                if (m[0] < 0.0 || m[1] < 0.0)
                    throw ConfigError("selectivity dataset '" + name_ + "' has negative yields");
    }
}

} // namespace catbench
