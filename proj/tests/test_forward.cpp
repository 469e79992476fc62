#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "invlab/forward.hpp"
#include "invlab/rng.hpp"
#include "oracles.hpp"

using namespace invlab;
using namespace invlab::forward;
using funcspace::evaluate1;
using funcspace::make_interval_indicator;

namespace {
const ForwardOp kIntegrate{ForwardKind::Integration};

manifolds::Family interval_family() { return manifolds::make_interval_family(0.1); }
}  // namespace

TEST_CASE("integration closed form on interval indicators") {
    auto full = apply_forward(kIntegrate, make_interval_indicator(0.0, 1.0));
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0})
        CHECK(evaluate1(full, t) == doctest::Approx(t).epsilon(1e-15));

    auto mid = apply_forward(kIntegrate, make_interval_indicator(0.25, 0.75));
    CHECK(evaluate1(mid, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(evaluate1(mid, 0.1) == doctest::Approx(0.0));
    CHECK(evaluate1(mid, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    auto zero = apply_forward(kIntegrate, funcspace::make_piecewise_linear({0.0, 1.0}, {0.0}, {0.0}));
    CHECK(funcspace::lp_norm(zero, 1.0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(apply_forward(kIntegrate, funcspace::make_gaussian({0.0})), invalid_input);
}

TEST_CASE("integration matches cumulative quadrature on general kinds") {
    auto f = funcspace::make_piecewise_linear({0.0, 0.4, 1.0}, {2.0, -1.0}, {0.0, 1.2});
    auto F = apply_forward(kIntegrate, f);
    for (double t : {0.2, 0.4, 0.7, 1.0}) {
        double oracle = oracles::quad([&](double s) { return evaluate1(f, s); }, 0.0, t, 64);
        CHECK(evaluate1(F, t) == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("integration is linear on closed forms") {
    CounterRng rng(12);
    std::uint64_t ctr = 0;
    for (int trial = 0; trial < 30; ++trial) {
        double a1 = rng.uniform(ctr++, 0.0, 0.6), b1 = a1 + rng.uniform(ctr++, 0.05, 1.0 - a1);
        double a2 = rng.uniform(ctr++, 0.0, 0.6), b2 = a2 + rng.uniform(ctr++, 0.05, 1.0 - a2);
        double al = rng.uniform(ctr++, 0.2, 2.0), be = rng.uniform(ctr++, 0.2, 2.0);
        auto f = make_interval_indicator(a1, b1), g = make_interval_indicator(a2, b2);
        auto Ff = apply_forward(kIntegrate, f);
        auto Fg = apply_forward(kIntegrate, g);
        // alpha f + beta g is piecewise constant on the merged breakpoints
        auto merged = funcspace::pwl_subtract(funcspace::to_piecewise_linear(f),
                                              funcspace::to_piecewise_linear(g));
        for (size_t i = 0; i + 1 < merged.breaks.size(); ++i) {
            double mid = 0.5 * (merged.breaks[i] + merged.breaks[i + 1]);
            merged.slope[i] = 0.0;
            merged.offset[i] = al * evaluate1(f, mid) + be * evaluate1(g, mid);
        }
        auto direct = apply_forward(kIntegrate, funcspace::FunctionRep{merged});
        for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
            CHECK(evaluate1(direct, t) ==
                  doctest::Approx(al * evaluate1(Ff, t) + be * evaluate1(Fg, t)).epsilon(1e-12));
    }
}

TEST_CASE("chart differential closed form and finite differences") {
    auto fam = interval_family();
    auto d = chart_differential(kIntegrate, fam, {0.2, 0.8}, {1.0, 0.0});
    // -chi_[0.2, 1]
    CHECK(evaluate1(d, 0.1) == doctest::Approx(0.0));
    CHECK(evaluate1(d, 0.5) == doctest::Approx(-1.0));
    CHECK(evaluate1(d, 0.9) == doctest::Approx(-1.0));
    CHECK(funcspace::lp_norm(d, 1.0) == doctest::Approx(0.8).epsilon(1e-14));

    auto z = chart_differential(kIntegrate, fam, {0.2, 0.8}, {0.0, 0.0});
    CHECK(funcspace::lp_norm(z, 1.0) == doctest::Approx(0.0));

    CounterRng rng(3);
    std::uint64_t ctr = 0;
    for (int trial = 0; trial < 40; ++trial) {
        double a = rng.uniform(ctr++, 0.12, 0.6), b = a + rng.uniform(ctr++, 0.15, 0.95 - a);
        double u = rng.uniform(ctr++, -1.0, 1.0), v = rng.uniform(ctr++, -1.0, 1.0);
        auto closed = chart_differential(kIntegrate, fam, {a, b}, {u, v}, DiffMode::ClosedForm);
        auto fd = chart_differential(kIntegrate, fam, {a, b}, {u, v}, DiffMode::FiniteDifference);
        CHECK(funcspace::lp_distance(closed, fd, 1.0) < 1e-5);
    }

    // linear in the direction (closed form, exact)
    auto d1 = chart_differential(kIntegrate, fam, {0.3, 0.7}, {1.0, 2.0});
    auto d2 = chart_differential(kIntegrate, fam, {0.3, 0.7}, {2.0, 4.0});
    for (double t : {0.1, 0.5, 0.9})
        CHECK(2.0 * evaluate1(d1, t) == doctest::Approx(evaluate1(d2, t)).epsilon(1e-14));

    CHECK_THROWS_AS(chart_differential(kIntegrate, fam, {0.8, 0.2}, {1.0, 0.0}), invalid_input);
    auto ball = manifolds::make_ball_family(2, 1.0, 0.5, 2.0, 1.0);
    CHECK_THROWS_AS(chart_differential(ForwardOp{ForwardKind::Identity}, ball,
                                       {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}),
                    invalid_input);
}

TEST_CASE("gaussian differential under the identity operator") {
    auto gauss = manifolds::make_gaussian_family(1, 1.0, 2.0);
    auto d = chart_differential(ForwardOp{ForwardKind::Identity}, gauss, {0.0}, {1.0});
    CHECK(funcspace::evaluate(d, {0.5}) ==
          doctest::Approx(2.0 * std::exp(-0.25) * 0.5).epsilon(1e-15));
}

TEST_CASE("independence of the measured directions: positive gram determinant") {
    CounterRng rng(44);
    std::uint64_t ctr = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double a = rng.uniform(ctr++, 0.01, 0.95);
        double b = a + rng.uniform(ctr++, 0.01, 0.99 - a);
        // gram matrix of {-chi_[a,1], chi_[b,1]} in L2
        double gaa = 1.0 - a, gbb = 1.0 - b, gab = -(1.0 - b);
        double det = gaa * gbb - gab * gab;
        double quad_gaa = invlab::integrate_split(
            [&](double t) { return (t >= a) ? 1.0 : 0.0; }, {0.0, a, 1.0}, 4, 12);
        CHECK(gaa == doctest::Approx(quad_gaa).epsilon(1e-10));
        CHECK(det > 0.0);
    }
}

TEST_CASE("differential continuity modulus") {
    auto fam = interval_family();
    CHECK(differential_continuity_modulus(fam, {0.2, 0.8}, {0.2, 0.8}) == doctest::Approx(0.0));
    double m = differential_continuity_modulus(fam, {0.2, 0.8}, {0.3, 0.8});
    CHECK(m <= std::sqrt(2.0) * 0.1 + 1e-12);
    CHECK(m == doctest::Approx(0.1).epsilon(1e-4));  // sup_theta |cos theta| * 0.1

    CounterRng rng(15);
    std::uint64_t ctr = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double a1 = rng.uniform(ctr++, 0.05, 0.6), b1 = a1 + rng.uniform(ctr++, 0.15, 0.98 - a1);
        double a2 = rng.uniform(ctr++, 0.05, 0.6), b2 = a2 + rng.uniform(ctr++, 0.15, 0.98 - a2);
        double mod = differential_continuity_modulus(fam, {a1, b1}, {a2, b2}, 180);
        CHECK(mod <= std::sqrt(2.0) * (std::fabs(a1 - a2) + std::fabs(b1 - b2)) + 1e-12);
    }
}

TEST_CASE("weight operator samples the exponential weight") {
    auto f = make_interval_indicator(0.0, 1.0);
    auto g = apply_forward(ForwardOp{ForwardKind::MultiplyWeight}, f);
    CHECK(evaluate1(g, 0.5) == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
    CHECK(evaluate1(g, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}
