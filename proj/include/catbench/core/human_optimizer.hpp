#pragma once

#include "catbench/core/session.hpp"

#include <optional>

namespace catbench {

// Relays a suggestion typed by a person. The service stages the submitted
// batch, then drives the session's suggest() exactly as for machine methods.
class HumanOptimizer final : public Optimizer {
public:
    void stage(Suggestion s) { staged_ = std::move(s); }
    bool has_staged() const noexcept { return staged_.has_value(); }

    Suggestion propose(OptimizerSession&, std::size_t count) override {
        if (!staged_)
            throw ProtocolError("no human suggestion staged");
        if (staged_->assignments.size() != count)
            throw ProtocolError("human batch has " + std::to_string(staged_->assignments.size()) +
                                " assignments, expected " + std::to_string(count));
        Suggestion s = std::move(*staged_);
        staged_.reset();
        return s;
    }
    std::string label() const override { return "human"; }

private:
    std::optional<Suggestion> staged_;
};

} // namespace catbench
