#include "catbench/analytics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <sstream>

namespace catbench::analytics {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

MethodGroups best_values_by_method(const std::vector<campaign::Trajectory>& runs, bool include_aborted) {
    MethodGroups groups;
    for (const auto& t : runs) {
        if (t.status == campaign::RunStatus::aborted && !include_aborted)
            continue;
        const auto best = t.best();
        if (!best)
            continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == t.method; });
        if (it == groups.end()) {
            groups.emplace_back(t.method, std::vector<double>{});
            it = std::prev(groups.end());
        }
        it->second.push_back(best->first);
    }
    return groups;
}

std::string entropy_csv(const std::vector<campaign::Trajectory>& runs) {
    std::ostringstream s;
    s << "run_id,method,dataset,status,best_value,best_position,cumulative_entropy,entropy_to_best,"
         "parameter_entropies\n";
    for (const auto& t : runs) {
        const auto r = entropy_report(t);
        std::string per;
        for (std::size_t i = 0; i < r.parameters.size(); ++i)
            per += (i ? ";" : "") + r.parameters[i] + "=" + csv_number(r.per_parameter[i]);
        s << csv_field(r.run_id) << "," << csv_field(r.method) << "," << csv_field(r.dataset) << ","
          << campaign::to_string(t.status) << "," << (r.best_value ? csv_number(*r.best_value) : "") << ","
          << (r.best_position ? std::to_string(*r.best_position) : "") << "," << csv_number(r.cumulative) << ","
          << (r.entropy_to_best ? csv_number(*r.entropy_to_best) : "") << "," << csv_field(per) << "\n";
    }
    return s.str();
}

std::string convergence_csv(const std::vector<campaign::Trajectory>& runs, const std::vector<double>& fractions,
                            double reference_max) {
    std::ostringstream s;
    s << "run_id,method,dataset,fraction,reference_max,iteration\n";
    for (const auto& t : runs)
        for (double f : fractions) {
            const auto it = convergence_iteration(t, f, reference_max);
            s << csv_field(t.run_id) << "," << csv_field(t.method) << "," << csv_field(t.dataset) << ","
              << csv_number(f) << "," << csv_number(reference_max) << "," << (it ? std::to_string(*it) : "")
              << "\n";
        }
    return s.str();
}

std::string stats_csv(const StatsReport& report) {
    std::ostringstream s;
    s << "method_a,method_b,p_value,delta,label\n";
    for (const auto& p : report.pairs)
        s << csv_field(p.method_a) << "," << csv_field(p.method_b) << "," << csv_number(p.p_value) << ","
          << csv_number(p.delta) << "," << to_string(p.label) << "\n";
    return s.str();
}

std::string summary_csv(const StatsReport& report) {
    std::ostringstream s;
    s << "method,n,median,ci_lower,ci_upper,median_vs_baseline,p_vs_baseline,delta_vs_baseline\n";
    auto opt = [](const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); };
    for (const auto& m : report.summaries)
        s << csv_field(m.method) << "," << m.n << "," << csv_number(m.ci.median) << "," << csv_number(m.ci.lower)
          << "," << csv_number(m.ci.upper) << "," << opt(m.median_difference) << "," << opt(m.p_vs_baseline) << ","
          << opt(m.delta_vs_baseline) << "\n";
    return s.str();
}

std::string duplicates_csv(const std::vector<campaign::Trajectory>& runs) {
    std::ostringstream s;
    s << "run_id,method,dataset,status,suggestions,duplicates,invalid_rate\n";
    for (const auto& t : runs)
        s << csv_field(t.run_id) << "," << csv_field(t.method) << "," << csv_field(t.dataset) << ","
          << campaign::to_string(t.status) << "," << t.suggestion_count() << "," << campaign::count_duplicates(t)
          << "," << csv_number(campaign::invalid_rate(t)) << "\n";
    return s.str();
}

} // namespace catbench::analytics
