#include "catbench/core/session.hpp"

#include "catbench/error.hpp"

namespace catbench {

std::string_view to_string(Validity v) {
    switch (v) {
    case Validity::valid: return "valid";
    case Validity::invalid_option: return "invalid_option";
    case Validity::off_table: return "off_table";
    }
    return "valid";
}

Validity validity_from_string(std::string_view s) {
    if (s == "valid")
        return Validity::valid;
    if (s == "invalid_option")
        return Validity::invalid_option;
    if (s == "off_table")
        return Validity::off_table;
    throw ConfigError("unknown validity '" + std::string(s) + "'");
}

OptimizerSession::OptimizerSession(std::shared_ptr<const ParameterSpace> space, std::vector<ObjectiveSpec> objectives,
                                   SessionConfig config, std::unique_ptr<Optimizer> optimizer)
    : space_(std::move(space)), objectives_(std::move(objectives)), config_(config), optimizer_(std::move(optimizer)),
      rng_(config.seed) {
    if (!space_ || !optimizer_)
        throw ConfigError("session needs a parameter space and an optimizer");
    if (config_.budget < 1 || config_.batch_size < 1)
        throw ConfigError("budget and batch size must be at least 1");
    if (config_.budget % config_.batch_size != 0)
        throw ConfigError("batch size must divide the budget");
}

Suggestion OptimizerSession::suggest() {
    if (awaiting_observation())
        throw ProtocolError("suggest called before the previous batch was observed");
    if (issued_ >= config_.budget)
        throw SessionComplete();

    Suggestion s = optimizer_->propose(*this, config_.batch_size);
    if (s.assignments.size() != config_.batch_size)
        throw ProtocolError("optimizer returned " + std::to_string(s.assignments.size()) + " assignments, expected " +
                            std::to_string(config_.batch_size));
    if (s.validity.empty())
        s.validity.assign(s.assignments.size(), Validity::valid);
    for (std::size_t i = 0; i < s.assignments.size(); ++i) {
        auto idx = space_->resolve(s.assignments[i]);
        if (!idx)
            s.validity[i] = Validity::invalid_option;
        else
            suggested_.insert(space_->flat_index(*idx));
    }
    outstanding_ = s.assignments;
    issued_ += s.assignments.size();
    ++iteration_;
    return s;
}

void OptimizerSession::observe(std::vector<ObservedResult> results) {
    if (!awaiting_observation())
        throw ProtocolError("observe called with no outstanding batch");
    if (results.size() != outstanding_.size())
        throw ProtocolError("observe got " + std::to_string(results.size()) + " results for a batch of " +
                            std::to_string(outstanding_.size()));
    for (std::size_t i = 0; i < results.size(); ++i)
        if (results[i].assignment != outstanding_[i])
            throw ProtocolError("observed assignment " + std::to_string(i) + " does not match the outstanding batch");
    for (auto& r : results) {
        if (!r.observation && r.validity == Validity::valid)
            r.validity = Validity::off_table;
        history_.push_back({iteration_, std::move(r.assignment), std::move(r.observation), r.validity});
    }
    outstanding_.clear();
}

std::optional<BestResult> best_so_far(std::span<const HistoryEntry> history, Goal goal,
                                      const AggregationPolicy& policy) {
    std::optional<BestResult> best;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& h = history[i];
        if (!h.observation || h.observation->empty())
            continue;
        const double v = aggregate_group(*h.observation, policy);
        if (!best || better(v, best->value, goal))
            best = BestResult{h.assignment, v, i};
    }
    return best;
}

std::optional<BestResult> best_so_far(const OptimizerSession& session, const AggregationPolicy& policy) {
    const Goal goal = policy.selectivity ? Goal::maximize : session.objectives().front().goal;
    return best_so_far(session.history(), goal, policy);
}

} // namespace catbench
