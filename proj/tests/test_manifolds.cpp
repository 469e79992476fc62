#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "invlab/manifolds.hpp"
#include "invlab/quadrature.hpp"
#include "invlab/rng.hpp"
#include "oracles.hpp"

using namespace invlab;
using namespace invlab::manifolds;

static std::vector<Family> all_families() {
    return {make_interval_family(0.1),
            make_ball_family(2, 1.0, 0.5, 2.0, 2.0),
            make_ball_intensity_family(2, 1.0, 0.5, 2.0),
            make_gaussian_family(1, 1.5, 2.0),
            make_simplex_family(geometry::SimplexParams{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}}, 2.0,
                                0.05)};
}

TEST_CASE("embed produces the expected ambient functions") {
    auto interval = make_interval_family(0.1);
    auto f = interval.embed(interval.make_point({0.2, 0.8}));
    CHECK(funcspace::evaluate1(f, 0.5) == 1.0);
    CHECK(funcspace::evaluate1(f, 0.9) == 0.0);

    auto ball = make_ball_family(2, 1.0, 0.5, 2.0, 1.0);
    auto g = ball.embed(ball.make_point({0.0, 0.0, 1.0}));
    CHECK(funcspace::evaluate(g, {0.5, 0.5}) == 1.0);
    CHECK(funcspace::evaluate(g, {1.5, 0.0}) == 0.0);

    auto gauss = make_gaussian_family(1, 1.0, 2.0);
    auto h = gauss.embed(gauss.make_point({0.0}));
    CHECK(funcspace::evaluate(h, {0.7}) == doctest::Approx(std::exp(-0.49)).epsilon(1e-15));

    CHECK_THROWS_AS(interval.make_point({0.5, 0.55}), invalid_input);  // b - a <= eps
}

TEST_CASE("chart coordinates invert the embedding") {
    CounterRng rng(17);
    for (const auto& fam : all_families()) {
        auto pts = fam.sample_compact(25, 3);
        for (const auto& x : pts) {
            auto back = fam.chart_coords(fam.embed(x));
            REQUIRE(back.coords.size() == x.coords.size());
            for (size_t i = 0; i < x.coords.size(); ++i)
                CHECK(back.coords[i] == doctest::Approx(x.coords[i]).epsilon(1e-15));
        }
    }
    (void)rng;
}

TEST_CASE("simplex chart sorts shuffled vertex columns") {
    auto fam = make_simplex_family(geometry::SimplexParams{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}},
                                   2.0, 0.05);
    auto f = funcspace::make_simplex_indicator(2, {1.02, 0.01, 0.01, 0.0, 0.0, 0.98});
    auto p = fam.chart_coords(f);
    auto g = funcspace::make_simplex_indicator(2, {0.01, 0.0, 1.02, 0.01, 0.0, 0.98});
    auto q = fam.chart_coords(g);
    CHECK(p.coords == q.coords);
    // columns line up with the base vertices (0,0), (0,1), (1,0)
    CHECK(p.coords == std::vector<double>{0.01, 0.0, 0.0, 0.98, 1.02, 0.01});
}

TEST_CASE("ambient distances: interval and intensity closed forms") {
    auto fam = make_interval_family(0.1);
    auto d1 = fam.ambient_distance(fam.make_point({0.1, 0.5}), fam.make_point({0.5, 0.9}));
    CHECK(d1 == doctest::Approx(0.8).epsilon(1e-14));
    auto d2 = fam.ambient_distance(fam.make_point({0.1, 0.5}), fam.make_point({0.2, 0.6}));
    CHECK(d2 == doctest::Approx(0.2).epsilon(1e-14));

    auto bi = make_ball_intensity_family(2, 1.0, 0.5, 2.0);
    auto x = bi.make_point({0.0, 0.0, 1.0, 1.0});
    auto y = bi.make_point({0.0, 0.0, 1.0, 1.5});
    CHECK(bi.ambient_distance(x, y) == doctest::Approx(0.5 * kPi).epsilon(1e-13));
}

TEST_CASE("holder data per family") {
    auto interval = make_interval_family(0.1);
    CHECK(interval.holder.alpha == doctest::Approx(1.0));
    CHECK(interval.holder.ell == doctest::Approx(0.1));
    CHECK(!interval.holder.ell_estimated);

    auto ball = make_ball_family(2, 1.0, 0.5, 2.0, 2.0);
    CHECK(ball.holder.alpha == doctest::Approx(0.5));
    CHECK(ball.holder.ell_estimated);

    auto gauss = make_gaussian_family(1, 1.5, 2.0);
    CHECK(gauss.holder.alpha == doctest::Approx(1.0));
}

TEST_CASE("compact-set sampling: centre first, membership, determinism") {
    auto ball = make_ball_family(2, 1.0, 0.5, 2.0, 1.0);
    auto single = ball.sample_compact(1, 42);
    CHECK(single.size() == 1);
    auto centre = ball.K.box.centre();
    for (size_t i = 0; i < centre.size(); ++i)
        CHECK(single[0].coords[i] == doctest::Approx(centre[i]));

    for (const auto& fam : all_families()) {
        auto pts = fam.sample_compact(40, 7);
        CHECK(pts.size() == 40);
        for (const auto& p : pts) CHECK(fam.in_K(p.coords));
        auto again = fam.sample_compact(40, 7);
        for (size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].coords == again[i].coords);
        auto other = fam.sample_compact(40, 8);
        bool any_diff = false;
        for (size_t i = 0; i < pts.size(); ++i) any_diff |= pts[i].coords != other[i].coords;
        CHECK(any_diff);
    }
}

TEST_CASE("two-sided chart comparison holds on sampled pairs") {
    // ell * ambient <= |chart|^alpha and |chart| <= ambient / ell
    for (const auto& fam : all_families()) {
        auto pts = fam.sample_compact(48, 11);
        long checked = 0;
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) {
                double chart = 0.0;
                for (size_t d = 0; d < pts[i].coords.size(); ++d)
                    chart += (pts[i].coords[d] - pts[j].coords[d]) *
                             (pts[i].coords[d] - pts[j].coords[d]);
                chart = std::sqrt(chart);
                double ambient = fam.ambient_distance(pts[i], pts[j]);
                CAPTURE(family_name(fam.tag));
                CHECK(fam.holder.ell * ambient <=
                      std::pow(chart, fam.holder.alpha) * (1.0 + 1e-9));
                CHECK(chart * fam.holder.ell <= ambient * (1.0 + 1e-9));
                ++checked;
            }
        CHECK(checked >= 1000);
    }
}

TEST_CASE("near-pair regression recovers the chart exponent for balls") {
    CounterRng rng(2718);
    for (double p : {1.0, 2.0, 4.0}) {
        auto fam = make_ball_family(2, 1.0, 0.5, 2.0, p);
        std::uint64_t ctr = 0;
        std::vector<double> lx, ly;
        auto pts = fam.sample_compact(50, 5);
        for (int trial = 0; trial < 2000; ++trial) {
            const auto& base = pts[static_cast<size_t>(trial) % pts.size()];
            double dist = std::pow(10.0, rng.uniform(ctr++, -6.0, -2.0));
            std::vector<double> c = base.coords;
            double nrm = 0.0;
            std::vector<double> dir(c.size());
            for (size_t d = 0; d < c.size(); ++d) {
                dir[d] = rng.uniform(ctr++, -1.0, 1.0);
                nrm += dir[d] * dir[d];
            }
            nrm = std::sqrt(nrm);
            if (nrm < 1e-9) continue;
            for (size_t d = 0; d < c.size(); ++d) c[d] += dist * dir[d] / nrm;
            if (!fam.in_K(c)) continue;
            double ambient = fam.ambient_distance(base, fam.make_point(c));
            if (ambient <= 0.0) continue;
            lx.push_back(std::log(dist));
            ly.push_back(std::log(ambient));
        }
        double slope = fit_line(lx, ly).slope;  // ambient ~ chart^(1/p)
        CHECK(slope == doctest::Approx(1.0 / p).epsilon(0.05));
        // the reciprocal regression recovers 1/alpha = p
        CHECK(1.0 / slope == doctest::Approx(p).epsilon(0.05));
    }
}

TEST_CASE("sup-norm distance degenerates for distinct ball indicators") {
    auto fam = make_ball_family(2, 1.0, 0.5, 2.0, 1.0);
    auto x = fam.make_point({0.0, 0.0, 1.0});
    auto y = fam.make_point({0.01, 0.0, 1.0});
    CHECK(fam.ambient_distance(x, y, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(1.0));
}

TEST_CASE("gaussian chart derivative") {
    auto zero = gaussian_chart_derivative({0.0}, {0.0});
    CHECK(funcspace::evaluate(zero, {0.3}) == 0.0);
    CHECK_THROWS_AS(gaussian_chart_derivative({}, {}), invalid_input);

    // norm of the derivative at a = 0, n = 1, unit direction
    auto d = gaussian_chart_derivative({0.0}, {1.0});
    double oracle = std::sqrt(oracles::quad(
        [](double z) { return 4.0 * std::exp(-2.0 * z * z) * z * z; }, -10.0, 10.0));
    CHECK(funcspace::lp_norm(d, 2.0) == doctest::Approx(oracle).epsilon(1e-12));

    // finite-difference quotient matches in L2 within 1e-4 relative
    double t = 1e-5;
    std::vector<double> a{0.2}, h{1.0};
    auto integrand = [&](const std::vector<double>& z) {
        double g1 = std::exp(-(z[0] - a[0] - t * h[0]) * (z[0] - a[0] - t * h[0]));
        double g0 = std::exp(-(z[0] - a[0]) * (z[0] - a[0]));
        double dv = 2.0 * std::exp(-(z[0] - a[0]) * (z[0] - a[0])) * (z[0] - a[0]) * h[0];
        double diff = (g1 - g0) / t - dv;
        return diff * diff;
    };
    double err = std::sqrt(integrate_box(integrand, {-9.0}, {11.0}, 24, 12));
    double ref = funcspace::lp_norm(d, 2.0);
    CHECK(err / ref < 1e-4);
}
