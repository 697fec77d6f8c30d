#include "catbench/service/leaderboard.hpp"

#include "catbench/analytics/statistics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace catbench::service {

void rank_entries(std::vector<LeaderboardEntry>& entries, Goal goal) {
    std::stable_sort(entries.begin(), entries.end(), [goal](const LeaderboardEntry& a, const LeaderboardEntry& b) {
        if (a.median_best != b.median_best)
            return better(a.median_best, b.median_best, goal);
        if (a.mean_best != b.mean_best)
            return better(a.mean_best, b.mean_best, goal);
        return a.method < b.method;
    });
}

std::vector<LeaderboardEntry> compute_leaderboard(const std::vector<const campaign::Trajectory*>& published,
                                                  const std::string& dataset) {
    std::map<std::string, LeaderboardEntry> by_method;
    std::map<std::string, std::vector<double>> values;
    Goal goal = Goal::maximize;
    for (const auto* t : published) {
        if (!t || t->dataset != dataset)
            continue;
        const auto best = t->best();
        if (!best)
            continue;
        goal = t->goal();
        auto& e = by_method[t->method];
        e.dataset = t->dataset;
        e.method = t->method;
        e.modality = t->modality;
        if (std::find(e.trajectories.begin(), e.trajectories.end(), t->run_id) != e.trajectories.end())
            continue;
        e.trajectories.push_back(t->run_id);
        values[t->method].push_back(best->first);
    }
    std::vector<LeaderboardEntry> out;
    for (auto& [method, e] : by_method) {
        const auto& v = values[method];
        if (v.empty())
            continue;
        e.runs = v.size();
        e.median_best = analytics::median(v);
        e.mean_best = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        std::sort(e.trajectories.begin(), e.trajectories.end());
        out.push_back(std::move(e));
    }
    rank_entries(out, goal);
    return out;
}

} // namespace catbench::service
