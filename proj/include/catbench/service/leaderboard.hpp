#pragma once

#include "catbench/campaign/trajectory.hpp"

#include <string>
#include <vector>

namespace catbench::service {

struct LeaderboardEntry {
    std::string dataset;
    std::string method;
    std::string modality;
    double median_best = 0.0;
    double mean_best = 0.0;
    std::size_t runs = 0;
    std::vector<std::string> trajectories; // run ids
};

// Groups published runs of `dataset` by method label and ranks by median
// best value, then mean, in the dataset's goal direction. Runs with no valid
// observation are left out. Pure: the same set gives the same board.
std::vector<LeaderboardEntry> compute_leaderboard(const std::vector<const campaign::Trajectory*>& published,
                                                  const std::string& dataset);

// Ranking rule alone, for entries built elsewhere.
void rank_entries(std::vector<LeaderboardEntry>& entries, Goal goal);

} // namespace catbench::service
