#pragma once

#include "catbench/analytics/entropy.hpp"
#include "catbench/analytics/statistics.hpp"
#include "catbench/campaign/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace catbench::analytics {

std::string csv_field(std::string_view s);
std::string csv_number(double v);

// Best aggregated value per run, grouped by method in first-seen order.
// Aborted runs are skipped unless include_aborted; runs with no valid
// observation are always skipped.
MethodGroups best_values_by_method(const std::vector<campaign::Trajectory>& runs, bool include_aborted = false);

// run_id,method,dataset,status,best_value,best_position,cumulative_entropy,entropy_to_best,parameter_entropies
std::string entropy_csv(const std::vector<campaign::Trajectory>& runs);

// run_id,method,dataset,fraction,reference_max,iteration (empty when not reached)
std::string convergence_csv(const std::vector<campaign::Trajectory>& runs, const std::vector<double>& fractions,
                            double reference_max);

// method_a,method_b,p_value,delta,label
std::string stats_csv(const StatsReport& report);

// method,n,median,ci_lower,ci_upper,median_vs_baseline,p_vs_baseline,delta_vs_baseline
std::string summary_csv(const StatsReport& report);

// run_id,method,dataset,status,suggestions,duplicates,invalid_rate
std::string duplicates_csv(const std::vector<campaign::Trajectory>& runs);

} // namespace catbench::analytics
