#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace catbench::bo {

// values[c][k]: objective k of candidate c, already oriented so that larger
// is better. Objectives are in hierarchy order.
using ObjectiveMatrix = std::vector<std::vector<double>>;

struct ChimeraResult {
    std::vector<double> merit;            // lower is better
    std::vector<std::size_t> levels;      // consecutive thresholds passed
    std::vector<std::size_t> deciding;    // objective that ordered the candidate
    std::vector<double> thresholds;       // per objective
    std::vector<double> span;             // per objective normalization range (0 if degenerate)
};

// Hard-cascade hierarchical scalarization. Thresholds come from `reference`
// (the candidates themselves when absent): level k accepts values at or above
// best_k - tolerance_k * range_k, where best and range are taken over the
// reference points that passed every earlier level. A zero range collapses the
// region to the single best value.
//
// A candidate that passes L levels gets merit (M - L) + 0.5 * (1 - u), where u
// is its value on the deciding objective (the first failed one, or the last
// objective when all pass) min-max scaled over reference and candidates.
ChimeraResult chimera_scalarize(const ObjectiveMatrix& values, const std::vector<double>& tolerances,
                                const ObjectiveMatrix* reference = nullptr);

} // namespace catbench::bo
