#pragma once

#include "catbench/campaign/trajectory.hpp"
#include "catbench/space/dataset.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace testing {

// Parameters p1, p2, ... with options a1.., b1.., ...
inline catbench::ParameterSpace make_space(const std::vector<std::size_t>& counts, const std::string& prefix = "p") {
    std::vector<catbench::Parameter> ps;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        catbench::Parameter p;
        p.name = prefix + std::to_string(i + 1);
        for (std::size_t j = 0; j < counts[i]; ++j)
            p.options.push_back(std::string(1, static_cast<char>('a' + i)) + std::to_string(j + 1));
        ps.push_back(std::move(p));
    }
    return catbench::ParameterSpace(std::move(ps));
}

inline std::shared_ptr<const catbench::BenchmarkDataset>
full_dataset(const std::string& name, const std::vector<std::size_t>& counts,
             const std::function<double(const catbench::OptionIndices&)>& f) {
    auto ds = std::make_shared<catbench::BenchmarkDataset>(name, make_space(counts),
                                                           std::vector<catbench::ObjectiveSpec>{{"yield"}});
    for (const auto& key : catbench::enumerate_space(ds->space()))
        ds->add_measurement(key, {f(key)});
    return ds;
}

inline catbench::campaign::SuggestionRecord record_for(const catbench::Assignment& a, std::optional<double> v) {
    catbench::campaign::SuggestionRecord s;
    s.assignment = a;
    if (v) {
        s.measurements = std::vector<catbench::MeasurementVector>{{*v}};
        s.value = v;
    } else {
        s.validity = catbench::Validity::off_table;
    }
    return s;
}

// One suggestion per iteration.
inline catbench::campaign::Trajectory
trajectory_of(const catbench::ParameterSpace& space, const std::vector<catbench::Assignment>& picks,
              const std::vector<std::optional<double>>& values, const std::string& method = "random") {
    catbench::campaign::Trajectory t;
    t.run_id = method + "-0";
    t.method = method;
    t.modality = method;
    t.dataset = "synthetic";
    t.space = space;
    t.objectives = {{"yield"}};
    t.status = catbench::campaign::RunStatus::complete;
    t.budget = picks.size();
    for (std::size_t s = 0; s < picks.size(); ++s) {
        catbench::campaign::IterationRecord it;
        it.index = s + 1;
        it.timestamp = "2024-01-01T00:00:00.000Z";
        it.suggestions.push_back(record_for(picks[s], values[s]));
        t.iterations.push_back(std::move(it));
    }
    return t;
}

} // namespace testing
