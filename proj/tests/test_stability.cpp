#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "invlab/stabilitylab.hpp"
#include "invlab/rng.hpp"
#include "oracles.hpp"

using namespace invlab;
using namespace invlab::stabilitylab;

namespace {
const forward::ForwardOp kIdentity{forward::ForwardKind::Identity};
const forward::ForwardOp kIntegrate{forward::ForwardKind::Integration};
}  // namespace

TEST_CASE("identity forward map has unit stability constant") {
    auto fam = manifolds::make_interval_family(0.1);
    auto rep = empirical_stability(fam, kIdentity, 600, 4, 1.0, 1e-2, 2);
    CHECK(rep.C_hat == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.L_hat == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.alpha_hat == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("integration on intervals: finite constant, unit exponent") {
    auto fam = manifolds::make_interval_family(0.1);
    auto rep = empirical_stability(fam, kIntegrate, 3000, 9, 1.0, 1e-2, 2);
    CHECK(std::isfinite(rep.C_hat));
    CHECK(rep.C_hat > 1.0);
    CHECK(rep.alpha_hat == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("ball family exponent in L2 is one half") {
    auto fam = manifolds::make_ball_family(2, 1.0, 0.5, 2.0, 2.0);
    auto rep = empirical_stability(fam, kIdentity, 3000, 13, 0.5, 1e-2, 2);
    CHECK(rep.alpha_hat == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("intensity and simplex families are Lipschitz in the chart") {
    auto bi = manifolds::make_ball_intensity_family(2, 1.0, 0.5, 2.0);
    auto rbi = empirical_stability(bi, kIdentity, 2000, 33, 1.0, 1e-2, 2);
    CHECK(rbi.alpha_hat == doctest::Approx(1.0).epsilon(0.05));

    auto sx = manifolds::make_simplex_family(
        invlab::geometry::SimplexParams{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}}, 2.0, 0.04);
    auto rsx = empirical_stability(sx, kIdentity, 2000, 34, 1.0, 1e-2, 2);
    CHECK(rsx.alpha_hat == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("projected constants stabilize in the bandwidth") {
    auto fam = manifolds::make_interval_family(0.1);
    auto base = empirical_stability(fam, kIntegrate, 2500, 21, 1.0, 1e-2, 2);
    double prev_ratio = 0.0;
    for (int N : {4, 8, 16, 32, 64}) {
        auto rep = projected_stability(fam, kIntegrate, N, 2500, 21, 1.0, 1e-2, 2);
        CHECK(std::isfinite(rep.C_hat));
        prev_ratio = rep.C_hat / base.C_hat;
    }
    CHECK(prev_ratio <= 2.0);
}

TEST_CASE("bandwidth zero leaves two unknowns against one datum") {
    auto fam = manifolds::make_interval_family(0.1);
    auto base = empirical_stability(fam, kIntegrate, 2500, 21, 1.0, 1e-2, 2);
    auto rep0 = projected_stability(fam, kIntegrate, 0, 60000, 21, 1.0, 1e-2, 2);
    CHECK(rep0.C_hat > 1e3 * base.C_hat);
}

TEST_CASE("resampling stability of the estimated constant") {
    auto fam = manifolds::make_interval_family(0.1);
    auto a = empirical_stability(fam, kIntegrate, 10000, 100, 1.0, 1e-2, 2);
    auto b = empirical_stability(fam, kIntegrate, 10000, 200, 1.0, 1e-2, 2);
    CHECK(std::fabs(a.C_hat - b.C_hat) / a.C_hat < 0.10);
}

TEST_CASE("deficit threshold scan") {
    auto fam = manifolds::make_interval_family(0.1);
    // a threshold above the first deficit: met immediately
    auto quick = find_sufficient_N(fam, kIntegrate, 1.0, 100.0, {4, 8}, 40, 3, 2);
    CHECK(quick.found);
    CHECK(quick.n_star == 4);
    // an unreachable threshold: exhausted with the curve reported
    auto never = find_sufficient_N(fam, kIntegrate, 1e12, 1e-9, {4, 8}, 40, 3, 2);
    CHECK(!never.found);
    CHECK(never.n_star == -1);
    CHECK(never.deficits.size() == 2);
    CHECK_THROWS_AS(find_sufficient_N(fam, kIntegrate, -1.0, 1.0, {4}, 40, 3, 2), invalid_input);
}

TEST_CASE("oscillatory derivative values along the vanishing sequence") {
    auto vals = counterexample_sin({1, 100});
    CHECK(vals[0] == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(vals[1] == doctest::Approx(1.0 / (100.0 * kPi)).epsilon(1e-15));
    std::vector<long> ks;
    for (long k = 1; k <= 1000; ++k) ks.push_back(k);
    auto all = counterexample_sin(ks);
    for (size_t i = 0; i < ks.size(); ++i) {
        double ref = 1.0 / (static_cast<double>(ks[i]) * kPi);
        CHECK(std::fabs(all[i] - ref) <= 1e-14 * ref);
    }
    CHECK_THROWS_AS(counterexample_sin({0}), invalid_input);
}

TEST_CASE("the derivative stays positive away from zero") {
    CounterRng rng(8);
    std::uint64_t ctr = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        double x = std::pow(10.0, rng.uniform(ctr++, -6.0, 0.0));
        CHECK(sin_example_derivative(x) > 0.0);
    }
}

TEST_CASE("weight-operator instability ratios decay under the bound") {
    for (double alpha : {0.5, 1.0}) {
        auto rows = counterexample_weight({0.2, 0.1, 0.05, 0.025}, alpha);
        for (size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].denominator == doctest::Approx(2.0 * rows[i].t).epsilon(1e-15));
            CHECK(rows[i].numerator <= 2.0 * rows[i].t * std::exp(-1.0 / rows[i].t) * (1.0 + 1e-12));
            CHECK(rows[i].ratio <= rows[i].bound * (1.0 + 1e-12));
            if (i > 0) CHECK(rows[i].ratio < rows[i - 1].ratio);
        }
    }
    CHECK_THROWS_AS(counterexample_weight({1.5}, 1.0), invalid_input);
    CHECK_THROWS_AS(counterexample_weight({0.1}, 1.5), invalid_input);
}

TEST_CASE("pair sweeps are deterministic and reject degenerate input") {
    auto fam = manifolds::make_interval_family(0.1);
    std::vector<PairSample> p1, p2;
    auto a = empirical_stability(fam, kIntegrate, 400, 5, 1.0, 1e-2, 1, &p1);
    auto b = empirical_stability(fam, kIntegrate, 400, 5, 1.0, 1e-2, 2, &p2);
    CHECK(a.C_hat == b.C_hat);
    REQUIRE(p1.size() == p2.size());
    for (size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].x == p2[i].x);
        CHECK(p1[i].y == p2[i].y);
    }
    CHECK_THROWS_AS(empirical_stability(fam, kIntegrate, 50, 5, 1.0), invalid_input);
}
