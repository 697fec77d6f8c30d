#include "catbench/bo/acquisition.hpp"
#include "catbench/bo/gp.hpp"
#include "catbench/kernels/posterior.hpp"
#include "catbench/kernels/random_forest.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace catbench;
using namespace catbench::kernels;

namespace {

std::vector<GPInput> random_inputs(std::size_t n, std::size_t dims, std::mt19937_64& rng, bool categorical) {
    std::vector<GPInput> out(n, GPInput(dims));
    for (auto& x : out)
        for (auto& v : x)
            v = categorical ? static_cast<double>(rng() % 4) : std::normal_distribution<double>()(rng);
    return out;
}

} // namespace

TEST_CASE("kernel values match their closed forms") {
    KernelParams h{KernelKind::hamming_ard, {1.0, 2.0, 0.5}, 1.5};
    const std::vector<double> a{0, 1, 2}, b{0, 3, 1};
    CHECK(kernel_value(h, a, b) == doctest::Approx(1.5 * std::exp(-(1.0 / 3.0) * (1.0 / 2.0 + 1.0 / 0.5))));
    CHECK(kernel_value(h, a, a) == doctest::Approx(1.5));

    KernelParams m{KernelKind::matern52_ard, {1.0, 2.0}, 2.0};
    const std::vector<double> x{0.0, 0.0}, y{0.6, 0.8};
    const double r = std::sqrt(0.36 + 0.16);
    const double s5 = std::sqrt(5.0);
    CHECK(kernel_value(m, x, y) == doctest::Approx(2.0 * (1 + s5 * r + 5 * r * r / 3) * std::exp(-s5 * r)));
}

TEST_CASE("parallel posterior agrees with the serial reference") {
    std::mt19937_64 rng(3);
    for (KernelKind kind : {KernelKind::hamming_ard, KernelKind::matern52_ard}) {
        const bool cat = kind == KernelKind::hamming_ard;
        auto train = random_inputs(40, 3, rng, cat);
        std::vector<double> y;
        for (const auto& x : train)
            y.push_back(x[0] - 0.5 * x[1] + 0.1 * std::normal_distribution<double>()(rng));
        const auto model = bo::GPModel::with_hyperparameters(kind, train, y, {{0.8, 1.2, 2.0}, 1.3, 1e-3});
        const auto cand = random_inputs(500, 3, rng, cat);
        const auto ser = model.predict_batch(cand, Execution::serial);
        const auto par = model.predict_batch(cand, Execution::parallel);
        REQUIRE(ser.mean.size() == cand.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            worst = std::max(worst, std::abs(ser.mean[i] - par.mean[i]));
            worst = std::max(worst, std::abs(ser.variance[i] - par.variance[i]));
            CHECK(par.variance[i] >= 0.0);
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("posterior matches a direct dense computation") {
    std::mt19937_64 rng(8);
    const auto train = random_inputs(12, 2, rng, false);
    std::vector<double> y;
    for (const auto& x : train)
        y.push_back(std::sin(x[0]) + x[1]);
    const auto model = bo::GPModel::with_hyperparameters(KernelKind::matern52_ard, train, y, {{1.0, 1.0}, 1.0, 1e-2});
    const auto& kp = model.kernel();
    Eigen::MatrixXd k(12, 12);
    Eigen::VectorXd ys(12);
    for (int i = 0; i < 12; ++i) {
        ys(i) = model.standardize(y[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 12; ++j)
            k(i, j) = kernel_value(kp, train[static_cast<std::size_t>(i)], train[static_cast<std::size_t>(j)]) +
                      (i == j ? 1e-2 + model.jitter() : 0.0);
    }
    const Eigen::MatrixXd kinv = k.inverse();
    const GPInput q{0.3, -0.2};
    Eigen::VectorXd ks(12);
    for (int i = 0; i < 12; ++i)
        ks(i) = kernel_value(kp, q, train[static_cast<std::size_t>(i)]);
    const auto p = model.predict(q);
    CHECK(p.mean == doctest::Approx(ks.dot(kinv * ys)).epsilon(1e-8));
    CHECK(p.variance == doctest::Approx(kernel_value(kp, q, q) - ks.dot(kinv * ks)).epsilon(1e-6));
}

TEST_CASE("GP fit interpolates noiseless data") {
    std::vector<GPInput> x;
    std::vector<double> y;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) {
            x.push_back({static_cast<double>(i), static_cast<double>(j)});
            y.push_back(10.0 * (i == 2) + j);
        }
    const auto model = bo::GPModel::fit(KernelKind::hamming_ard, x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(model.predict_raw(x[i]).mean == doctest::Approx(y[i]).epsilon(0.05));
    CHECK(std::isfinite(model.log_marginal_likelihood()));
}

TEST_CASE("EI and PI equal their defining integrals") {
    // Trapezoid rule over f ~ N(mean, sd^2) on +-12 sd.
    auto integrate = [](double mean, double sd, auto&& g) {
        const int n = 200000;
        const double lo = mean - 12 * sd, hi = mean + 12 * sd, h = (hi - lo) / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double f = lo + i * h;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            s += w * g(f) * std::exp(-0.5 * (f - mean) * (f - mean) / (sd * sd)) / (sd * std::sqrt(2 * std::numbers::pi));
        }
        return s * h;
    };
    for (double mean : {-1.3, 0.0, 0.4, 2.5})
        for (double sd : {0.05, 0.7, 2.0})
            for (double inc : {-0.5, 0.3, 1.0}) {
                bo::AcquisitionSpec ei{bo::AcquisitionKind::ei, 4.0, inc};
                bo::AcquisitionSpec pi{bo::AcquisitionKind::pi, 4.0, inc};
                const double ei_ref = integrate(mean, sd, [&](double f) { return std::max(0.0, f - inc); });
                const double pi_ref = integrate(mean, sd, [&](double f) { return f > inc ? 1.0 : 0.0; });
                CHECK(bo::acquisition_value(ei, mean, sd) == doctest::Approx(ei_ref).epsilon(1e-6));
                CHECK(bo::acquisition_value(pi, mean, sd) == doctest::Approx(pi_ref).epsilon(1e-4));
            }
}

TEST_CASE("acquisition degenerate and UCB cases") {
    bo::AcquisitionSpec ei{bo::AcquisitionKind::ei, 4.0, 1.0};
    bo::AcquisitionSpec pi{bo::AcquisitionKind::pi, 4.0, 1.0};
    bo::AcquisitionSpec ucb{bo::AcquisitionKind::ucb, 9.0, 0.0};
    CHECK(bo::acquisition_value(ei, 1.5, 0.0) == 0.5);
    CHECK(bo::acquisition_value(ei, 0.5, 0.0) == 0.0);
    CHECK(bo::acquisition_value(pi, 1.5, 0.0) == 1.0);
    CHECK(bo::acquisition_value(pi, 1.0, 0.0) == 0.0);
    CHECK(bo::acquisition_value(ucb, 0.2, 0.5) == doctest::Approx(1.7));
    CHECK(bo::acquisition_from_string("UCB") == bo::AcquisitionKind::ucb);
}

TEST_CASE("random forest is identical for serial and parallel training") {
    std::mt19937_64 rng(11);
    FeatureMatrix x(150, 6);
    std::vector<double> y(150);
    for (std::size_t r = 0; r < 150; ++r) {
        for (std::size_t c = 0; c < 6; ++c)
            x(r, c) = static_cast<double>(rng() % 3);
        y[r] = 5.0 * x(r, 0) + x(r, 3) + 0.01 * static_cast<double>(rng() % 100);
    }
    ForestConfig cfg;
    cfg.n_trees = 60;
    cfg.seed = 17;
    RandomForestRegressor a(cfg), b(cfg);
    a.fit(x, y, Execution::serial);
    b.fit(x, y, Execution::parallel);
    CHECK(a.feature_importances() == b.feature_importances());
    for (std::size_t r = 0; r < 150; r += 7)
        CHECK(a.predict(x.row(r)) == b.predict(x.row(r)));
    const auto imp = a.feature_importances();
    double sum = 0.0;
    for (double v : imp)
        sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(std::max_element(imp.begin(), imp.end()) == imp.begin());
}

TEST_CASE("a fully grown tree reproduces its training targets") {
    FeatureMatrix x(8, 2);
    std::vector<double> y;
    for (std::size_t r = 0; r < 8; ++r) {
        x(r, 0) = static_cast<double>(r % 4);
        x(r, 1) = static_cast<double>(r / 4);
        y.push_back(static_cast<double>(r * r));
    }
    RegressionTree t;
    std::vector<std::size_t> all(8);
    std::iota(all.begin(), all.end(), 0);
    t.fit(x, y, all, 2, 1);
    for (std::size_t r = 0; r < 8; ++r)
        CHECK(t.predict(x.row(r)) == y[r]);
}

TEST_CASE("constant targets give all-zero importances") {
    FeatureMatrix x(20, 3);
    for (std::size_t r = 0; r < 20; ++r)
        x(r, r % 3) = 1.0;
    std::vector<double> y(20, 4.0);
    RandomForestRegressor f({.n_trees = 10, .seed = 1});
    f.fit(x, y);
    for (double v : f.feature_importances())
        CHECK(v == 0.0);
}
