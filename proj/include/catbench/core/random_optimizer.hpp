#pragma once

#include "catbench/core/session.hpp"

#include <cstdint>
#include <unordered_set>

namespace catbench {

// Uniform sampling without replacement over the enumerated space. Draws come
// from the session generator, so a fixed seed fixes the whole sequence.
class RandomOptimizer final : public Optimizer {
public:
    Suggestion propose(OptimizerSession& session, std::size_t count) override;
    std::string label() const override { return "random"; }

    // One uniform draw over flat indices in neither `session.suggested()` nor
    // `also_excluded`. Throws SessionComplete when nothing is left.
    static std::uint64_t draw_unsuggested(OptimizerSession& session,
                                          const std::unordered_set<std::uint64_t>& also_excluded = {});
};

} // namespace catbench
