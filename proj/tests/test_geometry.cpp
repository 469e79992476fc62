#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "invlab/geometry.hpp"
#include "invlab/rng.hpp"
#include "invlab/special.hpp"
#include "oracles.hpp"

using namespace invlab;
using namespace invlab::geometry;

static BallParams random_ball(const CounterRng& rng, std::uint64_t& ctr, int n, double A,
                              double rho, double R) {
    BallParams b;
    for (int guard = 0; guard < 1000; ++guard) {
        b.centre.clear();
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) {
            b.centre.push_back(rng.uniform(ctr++, -A, A));
            nrm += b.centre.back() * b.centre.back();
        }
        if (std::sqrt(nrm) <= A) break;
    }
    b.radius = rng.uniform(ctr++, rho, R);
    return b;
}

TEST_CASE("cap volume: beta route against the elementary formulas") {
    for (int n = 1; n <= 3; ++n)
        for (double r : {0.5, 1.0, 2.3})
            for (double frac : {0.05, 0.3, 0.5, 0.8, 1.3, 1.9}) {
                double h = frac * r;
                CHECK(ball_cap_volume(n, r, h) ==
                      doctest::Approx(ball_cap_volume_elementary(n, r, h)).epsilon(1e-12));
            }
}

TEST_CASE("exact symmetric differences of balls") {
    BallParams unit{{0.0, 0.0}, 1.0};
    CHECK(ball_symmdiff_exact(unit, unit, 2) == doctest::Approx(0.0));
    BallParams far{{3.0, 0.0}, 1.0};
    CHECK(ball_symmdiff_exact(unit, far, 2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    BallParams shifted{{1.0, 0.0}, 1.0};
    double expected = 2.0 * kPi - 2.0 * oracles::lens_area_2d(1.0, 1.0, 1.0);
    CHECK(ball_symmdiff_exact(unit, shifted, 2) == doctest::Approx(expected).epsilon(1e-12));
    // tangency sits on the disjoint branch
    BallParams tangent{{2.0, 0.0}, 1.0};
    CHECK(ball_symmdiff_exact(unit, tangent, 2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    // nested
    BallParams inner{{0.0, 0.0}, 0.6};
    CHECK(ball_symmdiff_exact(unit, inner, 2) ==
          doctest::Approx(kPi * (1.0 - 0.36)).epsilon(1e-14));
    CHECK_THROWS_AS(ball_symmdiff_exact(BallParams{{0.0}, -1.0}, BallParams{{0.0}, 1.0}, 1),
                    invalid_input);
}

TEST_CASE("monte carlo estimates agree with the exact kernel") {
    BallParams unit{{0.0, 0.0}, 1.0};
    auto same = ball_symmdiff_montecarlo(unit, unit, 2, 20000, 1);
    CHECK(same.estimate <= 4.0 * same.stderr_ + 1e-12);
    BallParams far{{3.0, 0.0}, 1.0};
    auto dj = ball_symmdiff_montecarlo(unit, far, 2, 200000, 2);
    CHECK(std::fabs(dj.estimate - 2.0 * kPi) <= 4.0 * dj.stderr_);
    BallParams b2{{0.5, 0.5}, 1.2};
    auto mix = ball_symmdiff_montecarlo(unit, b2, 2, 400000, 3);
    CHECK(std::fabs(mix.estimate - ball_symmdiff_exact(unit, b2, 2)) <= 4.0 * mix.stderr_);
    CHECK_THROWS_AS(ball_symmdiff_montecarlo(unit, unit, 2, 100, 1), invalid_input);
}

TEST_CASE("monte carlo is worker-count invariant") {
    BallParams b1{{0.0, 0.0}, 1.0}, b2{{0.4, -0.2}, 0.8};
    auto one = ball_symmdiff_montecarlo(b1, b2, 2, 120000, 9, 1);
    auto four = ball_symmdiff_montecarlo(b1, b2, 2, 120000, 9, 4);
    CHECK(one.estimate == four.estimate);
    CHECK(one.stderr_ == four.stderr_);
}

TEST_CASE("ball parameter metric axioms on random triples") {
    CounterRng rng(31);
    std::uint64_t ctr = 0;
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 60; ++trial) {
            auto b1 = random_ball(rng, ctr, n, 1.5, 0.4, 1.5);
            auto b2 = random_ball(rng, ctr, n, 1.5, 0.4, 1.5);
            auto b3 = random_ball(rng, ctr, n, 1.5, 0.4, 1.5);
            double d12 = ball_symmdiff_exact(b1, b2, n);
            double d21 = ball_symmdiff_exact(b2, b1, n);
            double d13 = ball_symmdiff_exact(b1, b3, n);
            double d23 = ball_symmdiff_exact(b2, b3, n);
            CHECK(d12 == doctest::Approx(d21).epsilon(1e-12));
            CHECK(d12 >= 0.0);
            CHECK(d12 <= d13 + d23 + 1e-10);
            CHECK(ball_symmdiff_exact(b1, b1, n) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("exact agrees with monte carlo on random pairs per dimension") {
    CounterRng rng(407);
    std::uint64_t ctr = 0;
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            auto b1 = random_ball(rng, ctr, n, 1.2, 0.4, 1.4);
            auto b2 = random_ball(rng, ctr, n, 1.2, 0.4, 1.4);
            auto mc = ball_symmdiff_montecarlo(b1, b2, n, 200000,
                                               0xABCDu + static_cast<std::uint64_t>(trial));
            double exact = ball_symmdiff_exact(b1, b2, n);
            CHECK(std::fabs(mc.estimate - exact) <= 4.0 * mc.stderr_ + 1e-12);
        }
    }
}

TEST_CASE("bilip certifier: nested example with the proof constants") {
    BallParams outer{{0.0, 0.0}, 1.0}, inner{{0.0, 0.0}, 0.6};
    auto rep = bilip_certify(outer, inner, 2, 1.0, 0.5, 2.0);
    CHECK(rep.case_ == BallCase::Nested);
    CHECK(rep.lower_const == doctest::Approx(0.5 * kPi).epsilon(1e-14));
    CHECK(rep.upper_const == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(rep.ratio == doctest::Approx(1.6 * kPi).epsilon(1e-12));
    CHECK(rep.pass);
}

TEST_CASE("bilip certifier: degenerate and rejected inputs") {
    BallParams b{{0.2, 0.1}, 0.9};
    auto rep = bilip_certify(b, b, 2, 1.0, 0.5, 2.0);
    CHECK(rep.case_ == BallCase::Degenerate);
    CHECK(!rep.ratio_defined);
    CHECK(rep.pass);
    CHECK_THROWS_AS(bilip_certify(BallParams{{5.0, 0.0}, 1.0}, b, 2, 1.0, 0.5, 2.0),
                    invalid_input);
}

TEST_CASE("bilip certifier passes on random admissible pairs") {
    CounterRng rng(88);
    std::uint64_t ctr = 0;
    for (int n = 1; n <= 3; ++n) {
        double A = 1.0, rho = 0.5, R = 2.0;
        for (int trial = 0; trial < 120; ++trial) {
            auto b1 = random_ball(rng, ctr, n, A, rho, R);
            auto b2 = random_ball(rng, ctr, n, A, rho, R);
            auto rep = bilip_certify(b1, b2, n, A, rho, R);
            CAPTURE(n);
            CAPTURE(trial);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("simplex symmetric differences in the plane") {
    SimplexParams t1{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}};
    CHECK(simplex_symmdiff(t1, t1) == doctest::Approx(0.0));
    SimplexParams t2{2, {2.0, 2.0, 3.0, 2.0, 2.0, 3.0}};
    CHECK(simplex_symmdiff(t1, t2) == doctest::Approx(1.0).epsilon(1e-14));
    // shrink one vertex along the x-axis: the clipped overlap is the smaller
    // triangle, so the difference is exactly the area gap
    SimplexParams t3{2, {0.1, 0.0, 1.0, 0.0, 0.0, 1.0}};
    double a1 = simplex_volume(t1), a3 = simplex_volume(t3);
    auto inter = clip_convex({{0.1, 0.0}, {1.0, 0.0}, {0.0, 1.0}},
                             {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    double oracle = a1 + a3 - 2.0 * polygon_area(inter);
    CHECK(simplex_symmdiff(t1, t3) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(simplex_symmdiff(t1, t3) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS(simplex_volume(SimplexParams{2, {0, 0, 1, 0, 2, 0}}), invalid_input);
}

TEST_CASE("simplex monte carlo against closed results") {
    SimplexParams t1{3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}};
    SimplexParams t2{3, {3, 3, 3, 4, 3, 3, 3, 4, 3, 3, 3, 4}};
    auto mc = simplex_symmdiff_montecarlo(t1, t2, 200000, 5);
    CHECK(std::fabs(mc.estimate - 2.0 / 6.0) <= 4.0 * mc.stderr_);
}

TEST_CASE("vertex sorting is permutation invariant") {
    SimplexParams t{2, {1.0, 0.0, 0.0, 1.0, 0.0, 0.0}};
    auto sorted = sort_vertices(t);
    CHECK(sorted.vertices == std::vector<double>{0.0, 0.0, 0.0, 1.0, 1.0, 0.0});
}

TEST_CASE("convex clipping essentials") {
    std::vector<std::array<double, 2>> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_area(square) == doctest::Approx(1.0));
    auto clipped = clip_convex(square, {{2, 2}, {3, 2}, {2, 3}});
    CHECK(polygon_area(clipped) == doctest::Approx(0.0));
    auto half = clip_convex(square, {{0.5, -1}, {2, -1}, {2, 2}, {0.5, 2}});
    CHECK(polygon_area(half) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("simplex perturbations obey the lipschitz area bound") {
    // |T' delta T| <= 3^n (n+1) mu^{n-1} * max vertex displacement
    CounterRng rng(606);
    std::uint64_t ctr = 0;
    SimplexParams base{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}};
    double mu = 2.0;
    double c = std::pow(3.0, 2) * 3.0 * mu;
    for (int trial = 0; trial < 200; ++trial) {
        double delta = std::pow(10.0, rng.uniform(ctr++, -4.0, -1.0));
        SimplexParams pert = base;
        double max_move = 0.0;
        for (int j = 0; j < 3; ++j) {
            double dx = rng.uniform(ctr++, -1.0, 1.0), dy = rng.uniform(ctr++, -1.0, 1.0);
            double nrm = std::hypot(dx, dy);
            if (nrm < 1e-12) continue;
            pert.vertices[static_cast<size_t>(2 * j)] += delta * dx / nrm;
            pert.vertices[static_cast<size_t>(2 * j + 1)] += delta * dy / nrm;
            max_move = std::max(max_move, delta);
        }
        CHECK(simplex_symmdiff(base, pert) <= c * max_move + 1e-12);
    }
}
