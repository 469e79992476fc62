#include "invlab/stabilitylab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invlab/measurement.hpp"
#include "invlab/quadrature.hpp"
#include "invlab/rng.hpp"

namespace invlab::stabilitylab {

using funcspace::FunctionRep;
using manifolds::Family;
using manifolds::ModelPoint;

namespace {

// Deterministic draw of a K point; the counter advances through rejections.
std::vector<double> draw_k_point(const Family& fam, const CounterRng& rng, std::uint64_t& ctr) {
    const int m = fam.chart_dim();
    for (int guard = 0; guard < 100000; ++guard) {
        std::vector<double> c(static_cast<size_t>(m));
        for (int d = 0; d < m; ++d)
            c[static_cast<size_t>(d)] = rng.uniform(ctr++, fam.K.box.lo[static_cast<size_t>(d)],
                                                    fam.K.box.hi[static_cast<size_t>(d)]);
        if (fam.in_K(c)) return c;
    }
    throw numeric_failure("draw_k_point: the family constraint rejects the box");
}

// Near partner at a log-uniform chart distance below the cutoff.
std::vector<double> draw_near_partner(const Family& fam, const std::vector<double>& base,
                                      double cutoff, const CounterRng& rng, std::uint64_t& ctr) {
    const int m = fam.chart_dim();
    for (int guard = 0; guard < 100000; ++guard) {
        double dist = std::pow(10.0, rng.uniform(ctr++, -6.0, std::log10(cutoff)));
        std::vector<double> dir(static_cast<size_t>(m));
        double nrm = 0.0;
        for (int d = 0; d < m; ++d) {
            dir[static_cast<size_t>(d)] = rng.uniform(ctr++, -1.0, 1.0);
            nrm += dir[static_cast<size_t>(d)] * dir[static_cast<size_t>(d)];
        }
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) continue;
        std::vector<double> c = base;
        for (int d = 0; d < m; ++d) c[static_cast<size_t>(d)] += dist * dir[static_cast<size_t>(d)] / nrm;
        if (fam.in_K(c)) return c;
    }
    throw numeric_failure("draw_near_partner: could not stay inside K");
}

double forward_image_distance(const Family& fam, const forward::ForwardOp& op,
                              const ModelPoint& x, const ModelPoint& y) {
    if (op.kind == forward::ForwardKind::Identity) return fam.ambient_distance(x, y);
    if (op.kind == forward::ForwardKind::Integration) {
        FunctionRep fx = forward::apply_forward(op, fam.embed(x));
        FunctionRep fy = forward::apply_forward(op, fam.embed(y));
        return funcspace::lp_distance(fx, fy, fam.p);
    }
    // Multiplication by the exp(-1/t) weight: exact integral of g over the
    // symmetric difference of the two indicator supports.
    require(fam.tag == manifolds::FamilyTag::Interval,
            "forward_image_distance: weight operator needs the interval family");
    FunctionRep fx = fam.embed(x), fy = fam.embed(y);
    auto integrand = [&](double t) {
        double g = t <= 0.0 ? 0.0 : std::exp(-1.0 / t);
        return g * std::fabs(funcspace::evaluate1(fx, t) - funcspace::evaluate1(fy, t));
    };
    return integrate_split(integrand, {0.0, x.coords[0], x.coords[1], y.coords[0], y.coords[1], 1.0},
                           8, 16);
}

StabilityReport stability_sweep(const Family& fam, const forward::ForwardOp& op, int N, long pairs,
                                std::uint64_t seed, double alpha, double near_cutoff, int workers,
                                std::vector<PairSample>* persist) {
    require(pairs >= 100, "stability sweep: pairs >= 100");
    require(alpha > 0.0 && alpha <= 1.2, "stability sweep: alpha out of range");
    std::optional<measurement::MeasurementOperator> q;
    if (N >= 0) q.emplace(fam, op, N);

    CounterRng rng(seed);
    std::vector<PairSample> samples(static_cast<size_t>(pairs));
    parallel_for(pairs, workers, [&](long i) {
        CounterRng sub = rng.substream(static_cast<std::uint64_t>(i));
        std::uint64_t ctr = 0;
        PairSample ps;
        ps.x = draw_k_point(fam, sub, ctr);
        if (i % 2 == 0) {
            ps.y = draw_k_point(fam, sub, ctr);
        } else {
            ps.y = draw_near_partner(fam, ps.x, near_cutoff, sub, ctr);
        }
        double cd = 0.0;
        for (size_t d = 0; d < ps.x.size(); ++d)
            cd += (ps.x[d] - ps.y[d]) * (ps.x[d] - ps.y[d]);
        ps.chart_dist = std::sqrt(cd);
        ModelPoint mx = fam.make_point(ps.x), my = fam.make_point(ps.y);
        ps.ambient_dist = fam.ambient_distance(mx, my);
        if (N >= 0) {
            ps.image_dist = measurement::measurement_norm(
                measurement::measurement_sub(q->measure(ps.x), q->measure(ps.y)));
        } else {
            ps.image_dist = forward_image_distance(fam, op, mx, my);
        }
        samples[static_cast<size_t>(i)] = std::move(ps);
    });

    StabilityReport rep;
    rep.family = fam.tag;
    rep.op = op.kind;
    rep.p = fam.p;
    rep.N = N;
    rep.pairs = pairs;
    rep.seed = seed;
    rep.alpha_assumed = alpha;
    rep.near_cutoff = near_cutoff;

    std::vector<double> ratios;
    std::vector<double> log_chart, log_ambient;
    ratios.reserve(samples.size());
    for (const auto& ps : samples) {
        rep.ambient_diameter = std::max(rep.ambient_diameter, ps.ambient_dist);
        if (ps.ambient_dist <= 0.0) continue;
        if (ps.image_dist <= 0.0) {
            rep.C_hat = std::numeric_limits<double>::infinity();
            continue;
        }
        double ratio = ps.ambient_dist / std::pow(ps.image_dist, alpha);
        ratios.push_back(ratio);
        rep.C_hat = std::max(rep.C_hat, ratio);
        rep.L_hat = std::max(rep.L_hat, ps.image_dist / ps.ambient_dist);
        if (ps.chart_dist > 0.0 && ps.chart_dist < near_cutoff) {
            log_chart.push_back(std::log(ps.chart_dist));
            log_ambient.push_back(std::log(ps.ambient_dist));
        }
    }
    require(!ratios.empty(), "stability sweep: degenerate sampling, all pairs identical");
    std::sort(ratios.begin(), ratios.end());
    rep.C_p99 = ratios[static_cast<size_t>(std::min<double>(
        static_cast<double>(ratios.size()) - 1.0, std::floor(0.99 * static_cast<double>(ratios.size()))))];
    rep.near_count = static_cast<long>(log_chart.size());
    if (rep.near_count >= 8) rep.alpha_hat = fit_line(log_chart, log_ambient).slope;
    if (persist != nullptr) *persist = std::move(samples);
    return rep;
}

}  // namespace

StabilityReport empirical_stability(const Family& family, const forward::ForwardOp& op, long pairs,
                                    std::uint64_t seed, double alpha, double near_cutoff,
                                    int workers, std::vector<PairSample>* persist) {
    return stability_sweep(family, op, -1, pairs, seed, alpha, near_cutoff, workers, persist);
}

StabilityReport projected_stability(const Family& family, const forward::ForwardOp& op, int N,
                                    long pairs, std::uint64_t seed, double alpha,
                                    double near_cutoff, int workers,
                                    std::vector<PairSample>* persist) {
    require(N >= 0, "projected_stability: N >= 0");
    return stability_sweep(family, op, N, pairs, seed, alpha, near_cutoff, workers, persist);
}

DeficitScan find_sufficient_N(const Family& family, const forward::ForwardOp& op, double C,
                              double delta, const std::vector<int>& N_grid, long sample_count,
                              std::uint64_t seed, int workers) {
    require(C > 0.0 && delta > 0.0, "find_sufficient_N: C, delta > 0");
    require(!N_grid.empty(), "find_sufficient_N: empty grid");
    DeficitScan scan;
    scan.grid = N_grid;
    scan.threshold = delta / (4.0 * C);
    for (int n : N_grid) {
        double d = measurement::projection_deficit(op, family, n, sample_count, seed, workers);
        scan.deficits.push_back(d);
        if (!scan.found && d <= scan.threshold) {
            scan.found = true;
            scan.n_star = n;
            // Keep scanning so the full curve is reported.
        }
    }
    return scan;
}

double sin_example_derivative(double x) {
    require(x != 0.0, "sin_example_derivative: x != 0");
    double s = x > 0.0 ? 1.0 : -1.0;
    return 2.0 * x * (s + std::sin(1.0 / x)) - std::cos(1.0 / x) + 1.0;
}

std::vector<double> counterexample_sin(const std::vector<long>& k_list) {
    std::vector<double> out;
    out.reserve(k_list.size());
    for (long k : k_list) {
        require(k >= 1, "counterexample_sin: k >= 1");
        double xk = 1.0 / (2.0 * static_cast<double>(k) * kPi);
        // 1/x_k is an exact multiple of 2 pi, so sin(1/x_k) = 0 and
        // cos(1/x_k) = 1; what survives is 2 x_k.
        out.push_back(2.0 * xk);
    }
    return out;
}

std::vector<WeightRatio> counterexample_weight(const std::vector<double>& t_list, double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "counterexample_weight: alpha in (0,1]");
    std::vector<WeightRatio> out;
    out.reserve(t_list.size());
    for (double t : t_list) {
        require(t > 0.0 && t < 1.0, "counterexample_weight: t in (0,1)");
        WeightRatio w;
        w.t = t;
        auto g = [](double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); };
        // The integrand vanishes to every order at 0; grade the panels there.
        std::vector<double> splits{t * 1e-8, t * 1e-4, t * 1e-2, t * 0.1, t * 0.4, t};
        w.numerator = 2.0 * integrate_split(g, splits, 12, 16);
        w.denominator = 2.0 * std::min(1.0, t);
        w.ratio = std::pow(w.numerator, alpha) / w.denominator;
        w.bound = std::pow(2.0, alpha - 1.0) * std::exp(-alpha / t) / std::pow(t, 1.0 - alpha);
        out.push_back(w);
    }
    return out;
}

}  // namespace invlab::stabilitylab
