#include "catbench/core/random_optimizer.hpp"

#include "catbench/error.hpp"

#include <random>
#include <vector>

namespace catbench {

std::uint64_t RandomOptimizer::draw_unsuggested(OptimizerSession& session,
                                                const std::unordered_set<std::uint64_t>& also_excluded) {
    const auto& taken = session.suggested();
    const std::uint64_t total = session.space().cardinality();
    const std::uint64_t used = taken.size() + also_excluded.size();
    auto excluded = [&](std::uint64_t f) { return taken.contains(f) || also_excluded.contains(f); };

    if (used * 2 < total) {
        // rejection sampling stays uniform over the remainder and needs < 2
        // draws on average here
        std::uniform_int_distribution<std::uint64_t> draw(0, total - 1);
        while (true) {
            const auto f = draw(session.rng());
            if (!excluded(f))
                return f;
        }
    }
    std::vector<std::uint64_t> left;
    for (std::uint64_t f = 0; f < total; ++f)
        if (!excluded(f))
            left.push_back(f);
    if (left.empty())
        throw SessionComplete("every assignment in the space has been suggested");
    std::uniform_int_distribution<std::size_t> draw(0, left.size() - 1);
    return left[draw(session.rng())];
}

Suggestion RandomOptimizer::propose(OptimizerSession& session, std::size_t count) {
    Suggestion s;
    std::unordered_set<std::uint64_t> batch;
    for (std::size_t i = 0; i < count; ++i) {
        const auto f = draw_unsuggested(session, batch);
        batch.insert(f);
        s.assignments.push_back(session.space().labels_of(session.space().unflatten(f)));
    }
    s.validity.assign(count, Validity::valid);
    return s;
}

} // namespace catbench
