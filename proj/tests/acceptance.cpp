// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Scales and tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "invlab/io.hpp"
#include "invlab/reconstruct.hpp"
#include "invlab/rng.hpp"

using namespace invlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

double now_s() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void report(int idx, const char* what, bool pass, const std::string& detail) {
    std::printf("[%s] A%d %s%s%s\n", pass ? "PASS" : "FAIL", idx, what,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

geometry::BallParams random_ball(const CounterRng& rng, std::uint64_t& ctr, int n, double A,
                                 double rho, double R) {
    geometry::BallParams b;
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

void criterion_1_geometry_oracle() {
    double t0 = now_s();
    CounterRng rng(0xA1);
    std::uint64_t ctr = 0;
    long bad = 0, pairs_per_dim = 200, samples = 1000000;
    for (int n = 1; n <= 3; ++n) {
        for (long trial = 0; trial < pairs_per_dim; ++trial) {
            auto b1 = random_ball(rng, ctr, n, 1.2, 0.4, 1.4);
            auto b2 = random_ball(rng, ctr, n, 1.2, 0.4, 1.4);
            auto mc = geometry::ball_symmdiff_montecarlo(
                b1, b2, n, samples, 0xBEE5u + static_cast<std::uint64_t>(trial) * 3 + n, 2);
            double exact = geometry::ball_symmdiff_exact(b1, b2, n);
            if (std::fabs(mc.estimate - exact) > 4.0 * mc.stderr_ + 1e-12) ++bad;
        }
    }
    double dt = now_s() - t0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%ld/%ld pairs outside 4 stderr, %.1fs", bad,
                  3 * pairs_per_dim, dt);
    report(1, "exact vs Monte Carlo ball symmetric differences", bad == 0 && dt < 120.0, buf);
}

void criterion_2_certifier() {
    CounterRng rng(0xA2);
    std::uint64_t ctr = 0;
    long bad = 0;
    const double A = 1.0, rho = 0.5, R = 2.0;
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 500; ++trial) {
            auto b1 = random_ball(rng, ctr, n, A, rho, R);
            auto b2 = random_ball(rng, ctr, n, A, rho, R);
            auto rep = geometry::bilip_certify(b1, b2, n, A, rho, R);
            if (!rep.pass) ++bad;
        }
    }
    report(2, "two-sided ball bounds certified on admissible pairs", bad == 0,
           std::to_string(bad) + "/1500 failures");
}

void criterion_3_simplex_lipschitz() {
    CounterRng rng(0xA3);
    std::uint64_t ctr = 0;
    long bad2 = 0, bad3 = 0;
    {
        geometry::SimplexParams base{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}};
        const double mu = 2.0, c = std::pow(3.0, 2) * 3.0 * mu;
        for (int trial = 0; trial < 1000; ++trial) {
            double delta = std::pow(10.0, rng.uniform(ctr++, -5.0, std::log10(0.3)));
            geometry::SimplexParams pert = base;
            for (int j = 0; j < 3; ++j) {
                double dx = rng.uniform(ctr++, -1.0, 1.0), dy = rng.uniform(ctr++, -1.0, 1.0);
                double nrm = std::hypot(dx, dy);
                if (nrm < 1e-12) continue;
                pert.vertices[static_cast<size_t>(2 * j)] += delta * dx / nrm;
                pert.vertices[static_cast<size_t>(2 * j + 1)] += delta * dy / nrm;
            }
            if (geometry::simplex_symmdiff(base, pert) > c * delta * (1.0 + 1e-12)) ++bad2;
        }
    }
    {
        geometry::SimplexParams base{3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}};
        const double mu = 2.0, c = std::pow(3.0, 3) * 4.0 * mu * mu;
        for (int trial = 0; trial < 100; ++trial) {
            double delta = std::pow(10.0, rng.uniform(ctr++, -4.0, std::log10(0.3)));
            geometry::SimplexParams pert = base;
            for (int j = 0; j < 4; ++j) {
                double d[3], nrm = 0.0;
                for (double& v : d) {
                    v = rng.uniform(ctr++, -1.0, 1.0);
                    nrm += v * v;
                }
                nrm = std::sqrt(nrm);
                if (nrm < 1e-12) continue;
                for (int i = 0; i < 3; ++i)
                    pert.vertices[static_cast<size_t>(3 * j + i)] += delta * d[i] / nrm;
            }
            auto mc = geometry::simplex_symmdiff_montecarlo(base, pert, 200000,
                                                            0xCAFEu + static_cast<std::uint64_t>(trial));
            if (mc.estimate > c * delta + 4.0 * mc.stderr_) ++bad3;
        }
    }
    report(3, "simplex symmetric differences below the vertex-displacement bound",
           bad2 == 0 && bad3 == 0,
           std::to_string(bad2) + "/1000 planar, " + std::to_string(bad3) + "/100 spatial");
}

void criterion_4_holder_exponents() {
    double t0 = now_s();
    bool ok = true;
    std::string detail;
    auto check = [&](const manifolds::Family& fam, const forward::ForwardOp& op, double expect,
                     const char* label) {
        auto rep = stabilitylab::empirical_stability(fam, op, 10000, 0xA4, fam.holder.alpha,
                                                     1e-2, 2);
        bool pass = std::fabs(rep.alpha_hat - expect) <= 0.05 * expect;
        ok = ok && pass;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.4f ", label, rep.alpha_hat);
        detail += buf;
    };
    forward::ForwardOp identity{forward::ForwardKind::Identity};
    forward::ForwardOp integrate{forward::ForwardKind::Integration};
    check(manifolds::make_ball_family(2, 1.0, 0.5, 2.0, 1.0), identity, 1.0, "ball_p1");
    check(manifolds::make_ball_family(2, 1.0, 0.5, 2.0, 2.0), identity, 0.5, "ball_p2");
    check(manifolds::make_ball_family(2, 1.0, 0.5, 2.0, 4.0), identity, 0.25, "ball_p4");
    check(manifolds::make_gaussian_family(1, 1.5, 2.0), identity, 1.0, "gaussian");
    check(manifolds::make_interval_family(0.1), integrate, 1.0, "interval");
    double dt = now_s() - t0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", dt);
    report(4, "near-pair regressions recover the chart exponents", ok && dt < 300.0,
           detail + buf);
}

void criterion_5_projection_deficit() {
    auto fam = manifolds::make_interval_family(0.1);
    forward::ForwardOp integrate{forward::ForwardKind::Integration};
    // Calibrated large-distance cutoff and stability constant: the ambient
    // diameter of K (single-chart case) and the doubled empirical constant.
    auto stab = stabilitylab::empirical_stability(fam, integrate, 10000, 0xA5, 1.0, 1e-2, 2);
    double delta = stab.ambient_diameter;
    double C = 2.0 * stab.C_hat;
    auto scan = stabilitylab::find_sufficient_N(fam, integrate, C, delta,
                                                {4, 8, 16, 32, 64, 128}, 1000, 0xA5, 2);
    bool monotone = true;
    for (size_t i = 1; i < scan.deficits.size(); ++i)
        if (scan.deficits[i] > scan.deficits[i - 1] + 1e-10) monotone = false;
    std::string detail = "deficits ";
    for (double d : scan.deficits) detail += io::fmt17(d).substr(0, 9) + " ";
    detail += "threshold " + io::fmt17(scan.threshold).substr(0, 9) +
              " N*=" + std::to_string(scan.n_star);
    report(5, "projection deficit is monotone and meets delta/(4C)", monotone && scan.found,
           detail);
}

void criterion_6_jacobians() {
    forward::ForwardOp identity{forward::ForwardKind::Identity};
    forward::ForwardOp integrate{forward::ForwardKind::Integration};
    struct Cfg {
        manifolds::Family fam;
        forward::ForwardOp op;
        int N;
    };
    std::vector<Cfg> cfgs;
    cfgs.push_back({manifolds::make_interval_family(0.1), integrate, 12});
    cfgs.push_back({manifolds::make_ball_family(2, 1.0, 0.5, 2.0, 1.0), identity, 3});
    cfgs.push_back({manifolds::make_ball_intensity_family(2, 1.0, 0.5, 2.0), identity, 3});
    cfgs.push_back({manifolds::make_gaussian_family(2, 1.0, 2.0), identity, 3});
    cfgs.push_back({manifolds::make_simplex_family(
                        geometry::SimplexParams{2, {0.0, 0.0, 1.0, 0.0, 0.0, 1.0}}, 2.0, 0.04),
                    identity, 2});
    long bad = 0;
    for (const auto& cfg : cfgs) {
        measurement::MeasurementOperator q(cfg.fam, cfg.op, cfg.N);
        auto pts = cfg.fam.sample_compact(50, 0xA6);
        for (const auto& p : pts) {
            Matrix a = q.jacobian(p.coords);
            Matrix b = q.jacobian_fd(p.coords);
            for (long j = 0; j < a.cols; ++j) {
                double diff = 0.0, ref = 0.0;
                for (long i = 0; i < a.rows; ++i) {
                    diff += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
                    ref += a(i, j) * a(i, j);
                }
                if (std::sqrt(diff) > 1e-5 * std::max(std::sqrt(ref), 1e-9)) ++bad;
            }
        }
    }
    // closed-form differential against its finite-difference fallback
    auto fam = manifolds::make_interval_family(0.1);
    CounterRng rng(0xA66);
    std::uint64_t ctr = 0;
    long bad_diff = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double a = rng.uniform(ctr++, 0.12, 0.6), b = a + rng.uniform(ctr++, 0.15, 0.95 - a);
        double u = rng.uniform(ctr++, -1.0, 1.0), v = rng.uniform(ctr++, -1.0, 1.0);
        auto closed =
            forward::chart_differential(integrate, fam, {a, b}, {u, v}, forward::DiffMode::ClosedForm);
        auto fd = forward::chart_differential(integrate, fam, {a, b}, {u, v},
                                              forward::DiffMode::FiniteDifference);
        if (funcspace::lp_distance(closed, fd, 1.0) > 1e-5) ++bad_diff;
    }
    report(6, "measured Jacobians and differentials match finite differences",
           bad == 0 && bad_diff == 0,
           std::to_string(bad) + " bad columns, " + std::to_string(bad_diff) + " bad fallbacks");
}

std::vector<reconstruct::ReconstructionReport> g_runs;  // shared with criterion 8

void criterion_7_end_to_end() {
    double t0 = now_s();
    auto fam = manifolds::make_interval_family(0.1);
    forward::ForwardOp integrate{forward::ForwardKind::Integration};
    measurement::MeasurementOperator q(fam, integrate, 16);
    CounterRng rng(0xA7);
    std::uint64_t ctr = 0;
    int converged = 0, x0_ok = 0;
    const int instances = 20;
    for (int t = 0; t < instances; ++t) {
        std::vector<double> truth;
        while (truth.empty()) {
            std::vector<double> c{rng.uniform(ctr++, 0.1, 0.9), rng.uniform(ctr++, 0.1, 0.9)};
            if (fam.in_K(c)) truth = c;
        }
        auto m_dag = q.measure(truth);
        reconstruct::ReconstructOptions opts;
        opts.workers = 2;
        opts.seed = 0xA7;
        opts.stability_pairs = 4000;
        auto rep = reconstruct::reconstruct(fam, integrate, 16, m_dag, opts, &truth);
        double bound =
            std::min(rep.constants.rho_basin * rep.constants.ell, rep.constants.delta_km);
        if (fam.ambient_distance(fam.make_point(rep.x0.coords), fam.make_point(truth)) < bound)
            ++x0_ok;
        if (rep.converged && rep.final_chart_error <= 1e-6) ++converged;
        g_runs.push_back(std::move(rep));
    }
    double dt = now_s() - t0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d/%d initial guesses in bound, %d/%d converged, %.1fs",
                  x0_ok, instances, converged, instances, dt);
    report(7, "global reconstruction pipeline", x0_ok == instances && converged == instances &&
                                                    dt < 600.0,
           buf);
}

void criterion_8_rate_envelope() {
    // synthetic geometric recovery
    std::vector<double> geo;
    for (int k = 0; k < 50; ++k) geo.push_back(0.8 * std::pow(0.37, k));
    auto fit = reconstruct::rate_fit(geo, 1.0, 0.1);
    bool synth_ok = std::fabs(fit.c_hat - 0.37) < 1e-6;

    int envelope_ok = 0, with_rate = 0;
    for (const auto& rep : g_runs) {
        if (!rep.converged || !rep.rate_available) continue;
        ++with_rate;
        if (rep.rate.c_hat < 1.0 && rep.rate.bound_satisfied) ++envelope_ok;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "synthetic c recovered %s, %d/%d trajectories enveloped",
                  synth_ok ? "yes" : "no", envelope_ok, with_rate);
    report(8, "convergence-rate envelopes", synth_ok && with_rate == envelope_ok && with_rate > 0,
           buf);
}

void criterion_9_counterexamples() {
    std::vector<long> ks;
    for (long k = 1; k <= 1000; ++k) ks.push_back(k);
    auto vals = stabilitylab::counterexample_sin(ks);
    long bad_sin = 0;
    for (size_t i = 0; i < ks.size(); ++i) {
        double ref = 1.0 / (static_cast<double>(ks[i]) * kPi);
        if (std::fabs(vals[i] - ref) > 1e-14 * ref) ++bad_sin;
    }
    long bad_weight = 0;
    for (double alpha : {0.5, 1.0}) {
        auto rows = stabilitylab::counterexample_weight({0.2, 0.1, 0.05, 0.025}, alpha);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].ratio > rows[i].bound * (1.0 + 1e-12)) ++bad_weight;
            if (i > 0 && rows[i].ratio >= rows[i - 1].ratio) ++bad_weight;
        }
    }
    report(9, "instability witnesses", bad_sin == 0 && bad_weight == 0,
           std::to_string(bad_sin) + " bad derivative values, " + std::to_string(bad_weight) +
               " bad weight ratios");
}

void criterion_10_determinism() {
    auto fam = manifolds::make_interval_family(0.1);
    forward::ForwardOp integrate{forward::ForwardKind::Integration};
    measurement::MeasurementOperator q(fam, integrate, 12);
    std::vector<double> truth{0.31, 0.68};
    auto m_dag = q.measure(truth);
    reconstruct::ReconstructOptions opts;
    opts.workers = 2;
    opts.stability_pairs = 1000;
    auto r1 = reconstruct::reconstruct(fam, integrate, 12, m_dag, opts, &truth);
    auto r2 = reconstruct::reconstruct(fam, integrate, 12, m_dag, opts, &truth);
    bool reports_equal = io::reconstruction_json(r1).dump() == io::reconstruction_json(r2).dump() &&
                         io::trajectory_csv(r1.trajectory) == io::trajectory_csv(r2.trajectory);

    auto t1 = reconstruct::build_lattice(fam, integrate, 0.05, 12, 9, 1);
    auto t4 = reconstruct::build_lattice(fam, integrate, 0.05, 12, 9, 4);
    fs::path dir = fs::temp_directory_path() / "invlab_acceptance";
    fs::create_directories(dir);
    std::string p1 = (dir / "t1.tbl").string(), p4 = (dir / "t4.tbl").string(),
                p2 = (dir / "t2.tbl").string();
    reconstruct::save_lattice(t1, p1);
    reconstruct::save_lattice(t4, p4);
    bool workers_equal = io::read_file(p1) == io::read_file(p4);
    auto loaded = reconstruct::load_lattice(p1);
    reconstruct::save_lattice(loaded, p2);
    bool roundtrip = io::read_file(p1) == io::read_file(p2);

    report(10, "determinism and persistence",
           reports_equal && workers_equal && roundtrip,
           std::string(reports_equal ? "reports ok" : "reports differ") + ", " +
               (workers_equal ? "worker-invariant" : "worker-dependent") + ", " +
               (roundtrip ? "round-trip exact" : "round-trip drifted"));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1_geometry_oracle();
    criterion_2_certifier();
    criterion_3_simplex_lipschitz();
    criterion_4_holder_exponents();
    criterion_5_projection_deficit();
    criterion_6_jacobians();
    criterion_7_end_to_end();
    criterion_8_rate_envelope();
    criterion_9_counterexamples();
    criterion_10_determinism();
    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
