#include "catbench/bo/bo_optimizer.hpp"

#include "catbench/bo/chimera.hpp"
#include "catbench/core/random_optimizer.hpp"
#include "catbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace catbench::bo {

namespace {

constexpr double kTieTolerance = 1e-9;

struct TrainingSet {
    std::vector<GPInput> inputs;
    std::vector<std::vector<double>> targets; // objective -> replicate values
    ObjectiveMatrix observed;                 // key -> aggregated value per objective
};

double oriented(double v, Goal g) { return g == Goal::maximize ? v : -v; }

} // namespace

BayesianOptimizer::BayesianOptimizer(BOConfig config) : config_(std::move(config)) {
    if (config_.ucb_beta < 0.0)
        throw ConfigError("ucb_beta must be non-negative");
    if (config_.initial_points < 1)
        throw ConfigError("BO needs at least one initial point");
    for (double t : config_.tolerances)
        if (!(t >= 0.0 && t <= 1.0))
            throw ConfigError("Chimera tolerances must lie in [0, 1]");
}

std::string BayesianOptimizer::label() const {
    return "bo-" + std::string(to_string(config_.acquisition)) + "-" + std::string(to_string(config_.featurization));
}

Suggestion BayesianOptimizer::propose(OptimizerSession& session, std::size_t count) {
    if (count != 1)
        throw ConfigError("BO supports batch size 1 only");
    if (!featurization_)
        featurization_ = build_featurization(session.space(), config_.featurization,
                                             config_.featurization == FeaturizationMode::descriptors
                                                 ? &config_.descriptors
                                                 : nullptr);
    const auto flat = choose(session);
    Suggestion s;
    s.assignments.push_back(session.space().labels_of(session.space().unflatten(flat)));
    s.validity.push_back(Validity::valid);
    return s;
}

std::uint64_t BayesianOptimizer::choose(OptimizerSession& session) {
    const auto& space = session.space();
    const auto& objectives = session.objectives();
    const std::size_t m = objectives.size();
    last_ = {};

    TrainingSet train;
    train.targets.resize(m);
    for (const auto& h : session.history()) {
        if (!h.observation || h.observation->empty())
            continue;
        const auto idx = space.resolve(h.assignment);
        if (!idx)
            continue;
        const auto x = featurization_->encode(*idx);
        std::vector<double> agg(m);
        for (std::size_t k = 0; k < m; ++k) {
            agg[k] = oriented(aggregate_group(*h.observation, AggregationPolicy{config_.aggregation, false}, k),
                              objectives[k].goal);
        }
        for (const auto& mv : *h.observation) {
            train.inputs.push_back(x);
            for (std::size_t k = 0; k < m; ++k)
                train.targets[k].push_back(oriented(mv.at(k), objectives[k].goal));
        }
        train.observed.push_back(std::move(agg));
    }

    if (train.observed.size() < config_.initial_points) {
        last_.random = true;
        return RandomOptimizer::draw_unsuggested(session);
    }

    std::vector<std::uint64_t> candidates;
    const auto& used = session.suggested();
    for (std::uint64_t f = 0; f < space.cardinality(); ++f)
        if (!used.contains(f))
            candidates.push_back(f);
    if (candidates.empty())
        throw SessionComplete();
    if (candidates.size() == 1)
        return candidates.front();

    std::vector<GPInput> xs;
    xs.reserve(candidates.size());
    for (auto f : candidates)
        xs.push_back(featurization_->encode(space.unflatten(f)));

    const KernelKind kind =
        config_.featurization == FeaturizationMode::one_hot ? KernelKind::hamming_ard : KernelKind::matern52_ard;

    std::vector<GPModel> models;
    for (std::size_t k = 0; k < m; ++k) {
        GPFitOptions opts;
        opts.restarts = config_.restarts;
        opts.seed = session.rng()();
        models.push_back(GPModel::fit(kind, train.inputs, train.targets[k], opts));
    }

    AcquisitionSpec spec{config_.acquisition, config_.ucb_beta, 0.0};
    std::vector<double> mean(candidates.size()), sd(candidates.size());

    if (m == 1) {
        const auto post = models[0].predict_batch(xs, config_.exec);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& row : train.observed)
            best = std::max(best, row[0]);
        spec.incumbent = models[0].standardize(best);
        mean = post.mean;
        for (std::size_t c = 0; c < candidates.size(); ++c)
            sd[c] = std::sqrt(post.variance[c]);
    } else {
        std::vector<double> tol = config_.tolerances;
        if (tol.empty())
            for (const auto& o : objectives)
                tol.push_back(o.tolerance);
        if (tol.size() != m)
            throw ConfigError("need one Chimera tolerance per objective");

        std::vector<kernels::PosteriorBatch> post;
        for (const auto& model : models)
            post.push_back(model.predict_batch(xs, config_.exec));
        ObjectiveMatrix rows(train.observed);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            std::vector<double> r(m);
            for (std::size_t k = 0; k < m; ++k)
                r[k] = models[k].unstandardize(post[k].mean[c]);
            rows.push_back(std::move(r));
        }
        const auto scal = chimera_scalarize(rows, tol, &train.observed);
        const std::size_t n_obs = train.observed.size();
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_obs; ++i)
            best = std::max(best, -scal.merit[i]);
        spec.incumbent = best;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const std::size_t i = n_obs + c;
            const std::size_t d = scal.deciding[i];
            mean[c] = -scal.merit[i];
            const double raw_sd = std::sqrt(post[d].variance[c]) * models[d].target_scale();
            sd[c] = scal.span[d] > 0.0 ? 0.5 * raw_sd / scal.span[d] : 0.0;
        }
    }

    std::vector<double> acq(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c)
        acq[c] = acquisition_value(spec, mean[c], sd[c]);

    const double top = *std::max_element(acq.begin(), acq.end());
    const double tol = kTieTolerance * std::max(1.0, std::abs(top));
    std::vector<std::size_t> ties;
    for (std::size_t c = 0; c < acq.size(); ++c)
        if (acq[c] >= top - tol)
            ties.push_back(c);
    const std::size_t pick =
        ties.size() == 1 ? ties.front()
                         : ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(session.rng())];

    last_.candidates = std::move(candidates);
    last_.acquisition = std::move(acq);
    last_.incumbent = spec.incumbent;
    return last_.candidates[pick];
}

} // namespace catbench::bo
