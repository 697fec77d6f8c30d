#include "catbench/bo/chimera.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <limits>

namespace catbench::bo {

ChimeraResult chimera_scalarize(const ObjectiveMatrix& values, const std::vector<double>& tolerances,
                                const ObjectiveMatrix* reference) {
    if (values.empty())
        throw DomainError("chimera needs at least one candidate");
    const std::size_t m = tolerances.size();
    if (m == 0)
        throw DomainError("chimera needs at least one objective");
    const ObjectiveMatrix& ref = reference && !reference->empty() ? *reference : values;
    for (const auto* set : {&values, &ref})
        for (const auto& row : *set)
            if (row.size() != m)
                throw DomainError("chimera rows must have one value per objective");

    ChimeraResult out;
    out.thresholds.resize(m);
    out.span.resize(m);

    std::vector<std::size_t> region(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
        region[i] = i;
    for (std::size_t k = 0; k < m; ++k) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i : region) {
            hi = std::max(hi, ref[i][k]);
            lo = std::min(lo, ref[i][k]);
        }
        out.thresholds[k] = hi - tolerances[k] * (hi - lo);
        std::erase_if(region, [&](std::size_t i) { return ref[i][k] < out.thresholds[k]; });
    }

    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (const auto* set : {&values, &ref})
        for (const auto& row : *set)
            for (std::size_t k = 0; k < m; ++k) {
                lo[k] = std::min(lo[k], row[k]);
                hi[k] = std::max(hi[k], row[k]);
            }
    for (std::size_t k = 0; k < m; ++k)
        out.span[k] = hi[k] - lo[k];

    for (const auto& row : values) {
        std::size_t level = 0;
        while (level < m && row[level] >= out.thresholds[level])
            ++level;
        const std::size_t d = level < m ? level : m - 1;
        const double u = out.span[d] > 0.0 ? (row[d] - lo[d]) / out.span[d] : 0.5;
        out.merit.push_back(static_cast<double>(m - level) + 0.5 * (1.0 - u));
        out.levels.push_back(level);
        out.deciding.push_back(d);
    }
    return out;
}

} // namespace catbench::bo
