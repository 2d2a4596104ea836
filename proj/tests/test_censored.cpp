#include "lcmle/censored.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "lcmle/active_set.hpp"
#include "lcmle/errors.hpp"
#include "lcmle/objective.hpp"
#include "lcmle/piecewise.hpp"

using namespace lcmle;

namespace {

std::vector<CensoredObservation> exact_sample(const std::vector<double>& pts) {
    std::vector<CensoredObservation> obs;
    for (double p : pts) obs.push_back({p, p});
    return obs;
}

}  // namespace

TEST_SUITE("censored") {

TEST_CASE("censored log-likelihood") {
    const std::vector<double> grid{1.0, 2.0, 3.0};
    const LogDensity psi{{-0.2, -0.7, -1.4}};

    // Exact observations at grid points reduce to the complete-data mean.
    const auto obs = exact_sample({1.0, 2.0, 2.0, 3.0});
    const double want = (psi.values[0] + 2 * psi.values[1] + psi.values[2]) / 4.0;
    CHECK(censored_loglik(grid, psi, obs) == doctest::Approx(want).epsilon(1e-14));

    // Interval and right-censored terms are log masses, clipped to the support.
    const std::vector<double> ugrid{0.0, 1.0};
    const LogDensity uni{{0.0, 0.0}};
    CHECK(censored_loglik(ugrid, uni, {{0.0, 0.5}}) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-13));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(censored_loglik(ugrid, uni, {{0.5, inf}}) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-13));

    // Zero-mass observations yield -infinity rather than an exception.
    CHECK(censored_loglik(ugrid, uni, {{2.0, 2.0}}) == -inf);
}

TEST_CASE("e-step on exact data reproduces the empirical distribution") {
    const std::vector<double> grid{0.5, 1.0, 2.0};
    const auto obs = exact_sample({0.5, 1.0, 1.0, 2.0});
    for (double slope : {0.0, 1.0, -2.0}) {
        LogDensity psi{{0.0, slope, 2 * slope}};
        const auto wd = e_step(psi, obs, grid);
        REQUIRE(wd.size() == 3);
        CHECK(wd.p()[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(wd.p()[1] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(wd.p()[2] == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("e-step splits interval mass over cells at conditional means") {
    const std::vector<double> grid{0.0, 0.5, 1.0};
    const LogDensity uni{{0.0, 0.0, 0.0}};
    const auto wd = e_step(uni, {{0.0, 1.0}}, grid);
    REQUIRE(wd.size() == 2);
    CHECK(wd.x()[0] == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(wd.x()[1] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(wd.p()[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(wd.p()[1] == doctest::Approx(0.5).epsilon(1e-13));

    // Tilted density: one cell whose representative is the conditional mean.
    const std::vector<double> grid2{0.0, 1.0};
    const LogDensity ramp{{0.0, 1.0}};
    const auto wd2 = e_step(ramp, {{0.0, 1.0}, {0.5, 0.5}}, grid2);
    const double mean = 1.0 / (std::exp(1.0) - 1.0);  // \int x e^x / \int e^x on (0,1)
    bool found = false;
    for (std::size_t i = 0; i < wd2.size(); ++i)
        if (std::abs(wd2.x()[i] - mean) < 1e-12) found = true;
    CHECK(found);

    double total = 0.0;
    for (double w : wd2.p()) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("e-step rejects zero-mass intervals by name") {
    const std::vector<double> grid{0.0, 1.0};
    const LogDensity uni{{0.0, 0.0}};
    try {
        e_step(uni, {{0.2, 0.8}, {1.0, 2.0}}, grid);
        FAIL("expected DegenerateDataError");
    } catch (const DegenerateDataError& e) {
        CHECK(std::string(e.what()).find("#1") != std::string::npos);
    }
}

TEST_CASE("em on exact data equals the complete-data fit in one pass") {
    const std::vector<double> pts{0.3, 0.9, 0.9, 1.7, 2.2, 3.0, 3.1};
    const auto res = em_fit(exact_sample(pts));
    CHECK(res.n_iter == 1);
    CHECK(res.converged);
    CHECK(!res.support_truncated);

    const auto direct = fit(prepare(pts));
    REQUIRE(res.psi.values.size() == direct.psi.values.size());
    for (std::size_t i = 0; i < res.psi.values.size(); ++i)
        CHECK(res.psi.values[i] == doctest::Approx(direct.psi.values[i]).epsilon(1e-10));
    CHECK(std::abs(res.diagnostics.objective - direct.objective) <= 1e-8);
}

TEST_CASE("em on binned data ascends and ends concave") {
    std::vector<CensoredObservation> obs;
    for (int i = 0; i < 6; ++i) obs.push_back({0.0, 1.0});
    for (int i = 0; i < 4; ++i) obs.push_back({1.0, 2.0});
    const auto res = em_fit(obs);
    CHECK(res.converged);
    for (std::size_t i = 1; i < res.loglik_trace.size(); ++i)
        CHECK(res.loglik_trace[i] >= res.loglik_trace[i - 1] - 1e-10);

    const auto wd = prepare(res.support_points,
                            std::vector<double>(res.support_points.size(), 1.0));
    for (double c : constraint_values(res.psi, wd)) CHECK(c <= 1e-7);

    // The fitted density integrates to one over its support.
    const double mass = pw::mass_between(res.support_points, res.psi.values,
                                         res.support_points.front(),
                                         res.support_points.back());
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("em with mixed censoring ascends") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.1, 4.0);
    std::vector<CensoredObservation> obs;
    for (int i = 0; i < 25; ++i) {
        const double v = u(rng);
        if (i % 3 == 0) obs.push_back({v, v});
        else if (i % 3 == 1) obs.push_back({v, v + 0.5});
        else obs.push_back({v * 0.5, std::numeric_limits<double>::infinity()});
    }
    const auto res = em_fit(obs);
    CHECK(res.support_truncated);
    for (std::size_t i = 1; i < res.loglik_trace.size(); ++i)
        CHECK(res.loglik_trace[i] >= res.loglik_trace[i - 1] - 1e-10);
    CHECK(res.loglik_trace.size() >= 2);
}

TEST_CASE("right-censored-only data is rejected") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(em_fit({{0.5, inf}, {1.0, inf}, {2.0, inf}}), DegenerateDataError);
    // A lone right-censored point past every finite anchor is equally hopeless.
    CHECK_THROWS_AS(em_fit({{1.0, 1.0}, {2.0, 2.0}, {3.0, inf}}), DegenerateDataError);
}

TEST_CASE("interval log-mass derivative equals the conditional expectation") {
    // Perturbing the log-density by a piecewise-linear v moves the interval
    // log mass by E[v(X) | X in (L, R]]; the e-step measure computes that
    // expectation exactly for such v.
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    const std::vector<double> grid{0.0, 0.7, 1.3, 2.0, 2.9};
    for (int rep = 0; rep < 20; ++rep) {
        LogDensity psi{{uv(rng), uv(rng), uv(rng), uv(rng), uv(rng)}};
        std::vector<double> v{uv(rng), uv(rng), uv(rng), uv(rng), uv(rng)};
        const CensoredObservation interval{0.7, 2.9};

        const auto wd = e_step(psi, {interval}, grid);
        double expectation = 0.0;
        for (std::size_t i = 0; i < wd.size(); ++i)
            expectation += wd.p()[i] * pw::interp(grid, v, wd.x()[i]);

        const auto log_mass = [&](double t) {
            LogDensity moved = psi;
            for (std::size_t i = 0; i < grid.size(); ++i) moved.values[i] += t * v[i];
            return std::log(pw::mass_between(grid, moved.values, interval.left,
                                             interval.right));
        };
        const double fd = (log_mass(1e-6) - log_mass(-1e-6)) / 2e-6;
        CHECK(std::abs(fd - expectation) <= 1e-6);
    }
}

TEST_CASE("finer grids change the answer less and less") {
    std::vector<CensoredObservation> obs{{0.0, 1.0}, {0.0, 1.0}, {1.0, 2.0},
                                         {0.5, 1.5}, {1.5, 1.5}, {0.8, 0.8}};
    double ll[3];
    int refinement[3] = {1, 4, 16};
    for (int i = 0; i < 3; ++i) {
        EmConfig cfg;
        cfg.grid_refinement = refinement[i];
        ll[i] = em_fit(obs, cfg).loglik_trace.back();
    }
    CHECK(std::abs(ll[2] - ll[1]) <= std::abs(ll[1] - ll[0]) + 1e-9);
}

TEST_CASE("malformed observations are rejected") {
    CHECK_THROWS_AS(validate_observations({{-1.0, 2.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_observations({{2.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(validate_observations({{0.0, 0.0}}), std::domain_error);
    CHECK_THROWS_AS(em_fit({}), DegenerateDataError);
}

}  // TEST_SUITE
