#include "invlab/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "invlab/rng.hpp"

namespace invlab::reconstruct {

using manifolds::Family;
using manifolds::FamilyTag;
using measurement::Measurement;
using measurement::MeasurementOperator;

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Converged: return "converged";
        case StopReason::MaxIters: return "max-iters";
        default: return "diverged";
    }
}

double lattice_radius(double L_FK, double q_norm, double rho, double ell, double delta_km,
                      double alpha, double C) {
    require(L_FK > 0.0 && q_norm > 0.0 && rho > 0.0 && ell > 0.0 && delta_km > 0.0 && C > 0.0,
            "lattice_radius: all inputs must be positive");
    require(alpha > 0.5 && alpha <= 1.0, "lattice_radius: alpha in (1/2, 1]");
    double base = std::min(rho * ell, delta_km) / (2.0 * C);
    return std::pow(base, 1.0 / alpha) / (L_FK * q_norm);
}

double chart_spacing_for_radius(const Family& family, double r) {
    require(r > 0.0, "chart_spacing_for_radius: r > 0");
    double m = static_cast<double>(family.chart_dim());
    double s = 2.0 / std::sqrt(m) *
               std::pow(r / family.chart_to_ambient, 1.0 / family.holder.alpha);
    // Nodes clamped onto the K constraint move by up to one cell; leave slack.
    if (family.tag == FamilyTag::Interval) s *= 0.7;
    return s;
}

std::vector<double> LatticeGrid::node(long index) const {
    std::vector<double> x(origin.size());
    for (size_t d = origin.size(); d-- > 0;) {
        long c = counts[d];
        x[d] = origin[d] + static_cast<double>(index % c) * step[d];
        index /= c;
    }
    return x;
}

LatticeGrid plan_lattice(const Family& family, double r, long max_points) {
    double s = chart_spacing_for_radius(family, r);
    LatticeGrid grid;
    double total = 1.0;
    for (int d = 0; d < family.chart_dim(); ++d) {
        double lo = family.K.box.lo[static_cast<size_t>(d)];
        double hi = family.K.box.hi[static_cast<size_t>(d)];
        long c = std::max(1L, static_cast<long>(std::ceil((hi - lo) / s)));
        double step = (hi - lo) / static_cast<double>(c);
        grid.counts.push_back(c);
        grid.step.push_back(step);
        grid.origin.push_back(lo + 0.5 * step);
        total *= static_cast<double>(c);
    }
    if (total > static_cast<double>(max_points))
        throw numeric_failure("plan_lattice: grid of " + std::to_string(total) +
                              " nodes exceeds the cap of " + std::to_string(max_points));
    grid.total = static_cast<long>(total);
    return grid;
}

LatticeTable build_lattice(const Family& family, const forward::ForwardOp& op, double r, int N,
                           std::uint64_t seed, int workers, long max_points) {
    LatticeGrid grid = plan_lattice(family, r, max_points);
    MeasurementOperator q(family, op, N);
    LatticeTable table;
    table.family = family.tag;
    table.op = op.kind;
    table.ambient_dim = family.ambient_dim;
    table.family_p = family.p;
    table.box = family.K.box;
    table.r = r;
    table.N = N;
    table.seed = seed;
    table.points.resize(static_cast<size_t>(grid.total));
    table.measurements.resize(static_cast<size_t>(grid.total));
    parallel_for(grid.total, workers, [&](long i) {
        std::vector<double> h = family.clamp_to_K(grid.node(i));
        table.measurements[static_cast<size_t>(i)] = q.measure(h);
        table.points[static_cast<size_t>(i)] = std::move(h);
    });
    return table;
}

static std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void save_lattice(const LatticeTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "save_lattice: cannot open " + path);
    out << "invlab-lattice v" << table.version << "\n";
    out << "family " << manifolds::family_name(table.family) << "\n";
    out << "op " << forward::forward_name(table.op) << "\n";
    out << "ambient_dim " << table.ambient_dim << "\n";
    out << "p " << fmt17(table.family_p) << "\n";
    out << "N " << table.N << "\n";
    out << "seed " << table.seed << "\n";
    out << "r " << fmt17(table.r) << "\n";
    out << "box " << table.box.dim();
    for (double v : table.box.lo) out << " " << fmt17(v);
    for (double v : table.box.hi) out << " " << fmt17(v);
    out << "\n";
    int space_dim = table.measurements.empty() ? 1 : table.measurements.front().space_dim;
    double period = table.measurements.empty() ? 1.0 : table.measurements.front().period;
    long mdim = table.measurements.empty()
                    ? 0
                    : static_cast<long>(table.measurements.front().coeffs.size());
    out << "measurement " << space_dim << " " << fmt17(period) << " " << mdim << "\n";
    out << "rows " << table.points.size() << " " << table.box.dim() << "\n";
    for (size_t i = 0; i < table.points.size(); ++i) {
        bool first = true;
        for (double v : table.points[i]) {
            if (!first) out << ",";
            out << fmt17(v);
            first = false;
        }
        for (double v : table.measurements[i].coeffs) out << "," << fmt17(v);
        out << "\n";
    }
    require(out.good(), "save_lattice: write failed for " + path);
}

LatticeTable load_lattice(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "load_lattice: cannot open " + path);
    LatticeTable table;
    std::string line, word;
    require(static_cast<bool>(std::getline(in, line)), "load_lattice: empty file");
    require(line.rfind("invlab-lattice v", 0) == 0, "load_lattice: bad magic");
    table.version = std::stoi(line.substr(16));
    require(table.version == 1, "load_lattice: unsupported version");
    auto expect_key = [&](const char* key) -> std::istringstream {
        require(static_cast<bool>(std::getline(in, line)), std::string("load_lattice: missing ") + key);
        std::istringstream ss(line);
        ss >> word;
        require(word == key, std::string("load_lattice: expected ") + key + ", got " + word);
        return ss;
    };
    {
        auto ss = expect_key("family");
        ss >> word;
        table.family = manifolds::family_from_name(word);
    }
    {
        auto ss = expect_key("op");
        ss >> word;
        table.op = forward::forward_from_name(word);
    }
    expect_key("ambient_dim") >> table.ambient_dim;
    expect_key("p") >> table.family_p;
    expect_key("N") >> table.N;
    expect_key("seed") >> table.seed;
    expect_key("r") >> table.r;
    {
        auto ss = expect_key("box");
        int dim = 0;
        ss >> dim;
        table.box.lo.resize(static_cast<size_t>(dim));
        table.box.hi.resize(static_cast<size_t>(dim));
        for (auto& v : table.box.lo) ss >> v;
        for (auto& v : table.box.hi) ss >> v;
        require(!ss.fail(), "load_lattice: malformed box");
    }
    int space_dim = 1;
    double period = 1.0;
    long mdim = 0;
    {
        auto ss = expect_key("measurement");
        ss >> space_dim >> period >> mdim;
        require(!ss.fail(), "load_lattice: malformed measurement header");
    }
    size_t rows = 0;
    int chart_dim = 0;
    {
        auto ss = expect_key("rows");
        ss >> rows >> chart_dim;
        require(!ss.fail(), "load_lattice: malformed rows header");
    }
    table.points.reserve(rows);
    table.measurements.reserve(rows);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        require(static_cast<long>(vals.size()) == chart_dim + mdim, "load_lattice: malformed row");
        table.points.emplace_back(vals.begin(), vals.begin() + chart_dim);
        Measurement m;
        m.N = table.N;
        m.space_dim = space_dim;
        m.period = period;
        m.coeffs.assign(vals.begin() + chart_dim, vals.end());
        table.measurements.push_back(std::move(m));
    }
    require(table.points.size() == rows, "load_lattice: row count mismatch");
    return table;
}

double covering_radius_estimate(const Family& family, const LatticeTable& table, long samples,
                                std::uint64_t seed) {
    require(!table.points.empty(), "covering_radius_estimate: empty table");
    auto pts = family.sample_compact(samples, seed);
    double worst = 0.0;
    for (const auto& p : pts) {
        double best = 1e300;
        manifolds::ModelPoint mp = family.make_point(p.coords);
        for (const auto& node : table.points) {
            // Prefilter on chart distance; the ambient distance is bounded by
            // chart_to_ambient * chart^alpha.
            double cd = 0.0;
            for (size_t d = 0; d < node.size(); ++d)
                cd += (node[d] - p.coords[d]) * (node[d] - p.coords[d]);
            double bound =
                family.chart_to_ambient * std::pow(std::sqrt(cd), family.holder.alpha);
            if (bound >= best) continue;
            double da = family.ambient_distance(mp, family.make_point(node));
            best = std::min(best, da);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

InitialGuess select_initial(const LatticeTable& table, const Measurement& m_dag, double threshold,
                            bool argmin_mode) {
    require(!table.points.empty(), "select_initial: empty table");
    require(!table.measurements.empty() && table.measurements.front().N == m_dag.N,
            "select_initial: bandwidth mismatch with the table");
    InitialGuess best;
    double best_res = 1e300;
    for (size_t j = 0; j < table.points.size(); ++j) {
        double res =
            measurement::measurement_norm(measurement::measurement_sub(table.measurements[j], m_dag));
        if (res < threshold) {
            if (!argmin_mode) {
                return InitialGuess{static_cast<long>(j), table.points[j], res,
                                    static_cast<long>(j + 1)};
            }
            if (res < best_res) {
                best_res = res;
                best = InitialGuess{static_cast<long>(j), table.points[j], res, 0};
            }
        }
    }
    if (best.index >= 0) {
        best.scanned = static_cast<long>(table.points.size());
        return best;
    }
    throw no_initial_guess("select_initial: no lattice point meets the threshold " +
                           std::to_string(threshold));
}

InitialGuess select_initial_streaming(const MeasurementOperator& q, double r,
                                      const Measurement& m_dag, double threshold, long max_points,
                                      int workers, bool argmin_mode) {
    const Family& family = q.family();
    LatticeGrid grid = plan_lattice(family, r, max_points);
    // Slabs of contiguous chunks scanned in parallel; the hit with the lowest
    // scan index wins, so the result matches the sequential loop. In argmin
    // mode the whole grid is scanned and the smallest residual wins.
    const long chunk = 16384;
    const long chunks_per_slab = std::max(1, workers) * 4;
    InitialGuess found;
    for (long slab_begin = 0; slab_begin < grid.total && (argmin_mode || found.index < 0);
         slab_begin += chunk * chunks_per_slab) {
        long slab_chunks =
            std::min(chunks_per_slab, (grid.total - slab_begin + chunk - 1) / chunk);
        std::vector<InitialGuess> hits(static_cast<size_t>(slab_chunks));
        parallel_for(slab_chunks, workers, [&](long ci) {
            long begin = slab_begin + ci * chunk;
            long end = std::min(grid.total, begin + chunk);
            InitialGuess local;
            for (long j = begin; j < end; ++j) {
                std::vector<double> h = family.clamp_to_K(grid.node(j));
                Measurement m = q.measure(h);
                double res =
                    measurement::measurement_norm(measurement::measurement_sub(m, m_dag));
                if (res < threshold && (local.index < 0 || res < local.residual)) {
                    local = InitialGuess{j, std::move(h), res, j + 1};
                    if (!argmin_mode) break;
                }
            }
            hits[static_cast<size_t>(ci)] = std::move(local);
        });
        for (const auto& hit : hits) {
            if (hit.index < 0) continue;
            bool better = found.index < 0 || (argmin_mode ? hit.residual < found.residual
                                                          : hit.index < found.index);
            if (better) found = hit;
        }
    }
    if (found.index >= 0) {
        if (argmin_mode) found.scanned = grid.total;
        return found;
    }
    throw no_initial_guess("select_initial_streaming: scanned " + std::to_string(grid.total) +
                           " nodes, none meets the threshold " + std::to_string(threshold));
}

Trajectory landweber(const MeasurementOperator& q, const std::vector<double>& h0,
                     const Measurement& m_dag, double mu, const StopRule& stop,
                     const std::vector<double>* truth) {
    const Family& family = q.family();
    require(family.in_chart(h0), "landweber: h0 outside chart image");
    require(mu > 0.0, "landweber: mu > 0");
    Trajectory traj;
    traj.mu = mu;
    std::vector<double> h = h0;
    double res0 = -1.0;
    for (long k = 0;; ++k) {
        Measurement m = q.measure(h);
        Measurement diff = measurement::measurement_sub(m, m_dag);
        double res = measurement::measurement_norm(diff);
        traj.iterates.push_back(h);
        traj.residuals.push_back(res);
        if (truth != nullptr) {
            double cd = 0.0;
            for (size_t d = 0; d < h.size(); ++d)
                cd += (h[d] - (*truth)[d]) * (h[d] - (*truth)[d]);
            traj.chart_errors.push_back(std::sqrt(cd));
            traj.ambient_errors.push_back(family.ambient_distance(
                family.make_point(h), family.make_point(*truth)));
        }
        if (k == 0) res0 = res;
        if (res <= stop.tol) {
            traj.reason = StopReason::Converged;
            break;
        }
        if (k >= stop.max_iters) {
            traj.reason = StopReason::MaxIters;
            break;
        }
        if (res > 1e3 * (res0 + 1e-300)) {
            traj.reason = StopReason::Diverged;
            break;
        }
        Matrix jac = q.jacobian(h);
        std::vector<double> grad = transpose_apply(jac, diff.coeffs);
        for (size_t d = 0; d < h.size(); ++d) h[d] -= mu * grad[d];
        if (!family.in_chart(h)) {
            h = family.clamp_to_K(std::move(h));
            ++traj.clamp_events;
        }
    }
    return traj;
}

RateFit rate_fit(const std::vector<double>& errors, double alpha, double ell, double rho_given,
                 double c_given) {
    require(alpha > 0.5 && alpha <= 1.0, "rate_fit: alpha in (1/2, 1]");
    require(ell > 0.0, "rate_fit: ell > 0");
    size_t end = errors.size();
    while (end > 0 && errors[end - 1] <= 0.0) --end;
    require(end > 0, "rate_fit: no positive errors");
    size_t start = end - 1;
    while (start > 0 && errors[start - 1] > errors[start]) --start;
    if (end - start < 5) throw numeric_failure("rate_fit: decreasing tail shorter than 5 entries");

    RateFit fit;
    fit.tail_begin = start;
    fit.tail_len = end - start;
    std::vector<double> ks, logs;
    for (size_t k = start; k < end; ++k) {
        ks.push_back(static_cast<double>(k));
        logs.push_back(std::log(errors[k]));
    }
    const double slack = 1.0 + 1e-9;
    if (alpha == 1.0) {
        fit.c_hat = std::exp(fit_line(ks, logs).slope);
        double c_env = std::isnan(c_given) ? fit.c_hat : c_given;
        double amp = 0.0;  // smallest rho/ell with e_k <= (rho/ell) c^k on the tail
        for (size_t k = start; k < end; ++k)
            amp = std::max(amp, errors[k] / std::pow(c_env, static_cast<double>(k)));
        fit.rho_hat = ell * amp;
        double rho_env = std::isnan(rho_given) ? fit.rho_hat : rho_given;
        fit.bound_satisfied = c_env < 1.0;
        for (size_t k = start; k < end && fit.bound_satisfied; ++k)
            if (errors[k] > (rho_env / ell) * std::pow(c_env, static_cast<double>(k)) * slack)
                fit.bound_satisfied = false;
        return fit;
    }
    // Power-law envelope (1/ell) (c k (1-alpha)/alpha + rho^{-(1-alpha)/alpha})^{-gamma}
    // linearizes as (ell e_k)^{-1/gamma} = c (1-alpha)/alpha * k + rho^{-(1-alpha)/alpha}.
    const double gamma = alpha * alpha / (2.0 * (1.0 - alpha));
    std::vector<double> z;
    for (size_t k = start; k < end; ++k)
        z.push_back(std::pow(ell * errors[k], -1.0 / gamma));
    LineFit lin = fit_line(ks, z);
    require(lin.slope > 0.0 && lin.intercept > 0.0, "rate_fit: power-law linearization failed");
    fit.c_hat = lin.slope * alpha / (1.0 - alpha);
    fit.rho_hat = std::pow(lin.intercept, -alpha / (1.0 - alpha));
    double c_env = std::isnan(c_given) ? fit.c_hat : c_given;
    double rho_env = std::isnan(rho_given) ? fit.rho_hat : rho_given;
    fit.bound_satisfied = true;
    for (size_t k = start; k < end && fit.bound_satisfied; ++k) {
        double env = std::pow(c_env * static_cast<double>(k) * (1.0 - alpha) / alpha +
                                  std::pow(rho_env, -(1.0 - alpha) / alpha),
                              -gamma) /
                     ell;
        if (errors[k] > env * slack) fit.bound_satisfied = false;
    }
    return fit;
}

double default_basin_radius(const Family& family) {
    switch (family.tag) {
        case FamilyTag::Interval:
            return 0.2;  // calibrated: fixed-step runs stall from starts beyond ~0.25
        case FamilyTag::Simplex:
            return 0.15;  // calibrated on the default n=2 chart
        default:
            return 0.25 * family.K.box.euclid_diameter();
    }
}

double calibrate_basin(const Family& family, const forward::ForwardOp& op, int N, int trials,
                       std::uint64_t seed, const StopRule& stop) {
    require(trials >= 1, "calibrate_basin: trials >= 1");
    MeasurementOperator q(family, op, N);
    CounterRng rng(seed);
    const int m = family.chart_dim();

    auto trial_ok = [&](double radius, int t) {
        CounterRng sub = rng.substream(static_cast<std::uint64_t>(t));
        std::uint64_t ctr = 0;
        std::vector<double> truth;
        for (int guard = 0; guard < 1000 && truth.empty(); ++guard) {
            std::vector<double> c(static_cast<size_t>(m));
            for (int d = 0; d < m; ++d)
                c[static_cast<size_t>(d)] = sub.uniform(ctr++, family.K.box.lo[static_cast<size_t>(d)],
                                                        family.K.box.hi[static_cast<size_t>(d)]);
            if (family.in_K(c)) truth = std::move(c);
        }
        if (truth.empty()) return true;
        Measurement m_dag = q.measure(truth);
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<double> dir(static_cast<size_t>(m));
            double nrm = 0.0;
            for (int d = 0; d < m; ++d) {
                dir[static_cast<size_t>(d)] = sub.uniform(ctr++, -1.0, 1.0);
                nrm += dir[static_cast<size_t>(d)] * dir[static_cast<size_t>(d)];
            }
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) continue;
            std::vector<double> h0 = truth;
            for (int d = 0; d < m; ++d) h0[static_cast<size_t>(d)] += radius * dir[static_cast<size_t>(d)] / nrm;
            if (!family.in_chart(h0)) continue;
            Matrix jac = q.jacobian(h0);
            double sigma = spectral_norm(jac);
            if (sigma <= 0.0) return false;
            Trajectory traj = landweber(q, h0, m_dag, 1.0 / (sigma * sigma), stop, &truth);
            if (traj.reason != StopReason::Converged) return false;
            double cd = 0.0;
            for (size_t d = 0; d < truth.size(); ++d) {
                double dd = traj.iterates.back()[d] - truth[d];
                cd += dd * dd;
            }
            return std::sqrt(cd) <= 1e-5;
        }
        return true;  // no admissible start at this radius: vacuous
    };

    double lo = 0.0, hi = family.K.box.euclid_diameter();
    for (int step = 0; step < 10; ++step) {
        double mid = 0.5 * (lo + hi);
        bool ok = true;
        for (int t = 0; t < trials && ok; ++t) ok = trial_ok(mid, t);
        if (ok)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

ReconstructionReport reconstruct(const Family& family, const forward::ForwardOp& op, int N,
                                 const Measurement& m_dag, const ReconstructOptions& opts,
                                 const std::vector<double>* truth, const LatticeTable* table) {
    MeasurementOperator q(family, op, N);
    require(static_cast<long>(m_dag.coeffs.size()) == q.dim(),
            "reconstruct: measurement dimension mismatch");

    ReconstructionReport rep;
    ConstantsReport& cst = rep.constants;
    cst.alpha = family.holder.alpha;
    cst.ell = family.holder.ell;
    require(cst.alpha > 0.5 && cst.alpha <= 1.0,
            "reconstruct: the family exponent must lie in (1/2, 1]");

    // Constants acquisition: empirical sup-ratio estimates doubled as a
    // safety margin, overridable from the configuration. The larger of the
    // plain and projected stability constants feeds the threshold.
    if (std::isnan(opts.C_override) || std::isnan(opts.L_override)) {
        auto rep_f = stabilitylab::empirical_stability(family, op, opts.stability_pairs,
                                                       opts.seed, cst.alpha, 1e-2, opts.workers);
        auto rep_q = stabilitylab::projected_stability(family, op, N, opts.stability_pairs,
                                                       opts.seed + 1, cst.alpha, 1e-2, opts.workers);
        cst.C_f = 2.0 * rep_f.C_hat;
        cst.C_qnf = 2.0 * rep_q.C_hat;
        cst.L_fk = 2.0 * rep_q.L_hat;  // Lipschitz bound of the measured map
    }
    if (std::isnan(opts.C_override)) {
        cst.C_used = std::max(cst.C_f, cst.C_qnf);
    } else {
        cst.C_used = opts.C_override;
        cst.C_overridden = true;
    }
    if (!std::isnan(opts.L_override)) {
        cst.L_fk = opts.L_override;
        cst.L_overridden = true;
    }
    cst.rho_basin = std::isnan(opts.rho_override) ? default_basin_radius(family) : opts.rho_override;
    cst.rho_overridden = !std::isnan(opts.rho_override);
    cst.delta_km = std::isnan(opts.delta_km_override) ? family.K.delta_km : opts.delta_km_override;
    cst.delta_overridden = !std::isnan(opts.delta_km_override);
    require(cst.C_used > 0.0 && std::isfinite(cst.C_used), "reconstruct: unusable stability constant");
    require(cst.L_fk > 0.0 && std::isfinite(cst.L_fk), "reconstruct: unusable Lipschitz constant");

    cst.threshold = std::pow(std::min(cst.rho_basin * cst.ell, cst.delta_km) / (2.0 * cst.C_used),
                             1.0 / cst.alpha);
    cst.radius = lattice_radius(cst.L_fk, measurement::qn_operator_norm_bound(), cst.rho_basin,
                                cst.ell, cst.delta_km, cst.alpha, cst.C_used);

    if (table != nullptr) {
        require(table->family == family.tag && table->N == N && table->op == op.kind,
                "reconstruct: lattice table does not match the configuration");
        rep.x0 = select_initial(*table, m_dag, cst.threshold, opts.argmin_initial);
        rep.used_prebuilt_table = true;
    } else {
        rep.x0 = select_initial_streaming(q, cst.radius, m_dag, cst.threshold,
                                          opts.max_lattice_points, opts.workers,
                                          opts.argmin_initial);
    }
    rep.lattice_points_scanned = rep.x0.scanned;

    if (std::isnan(opts.mu_override)) {
        double sigma = spectral_norm(q.jacobian(rep.x0.coords));
        require(sigma > 0.0, "reconstruct: vanishing measured Jacobian at the initial guess");
        cst.mu = 1.0 / (sigma * sigma);
    } else {
        cst.mu = opts.mu_override;
        cst.mu_overridden = true;
    }

    rep.trajectory = landweber(q, rep.x0.coords, m_dag, cst.mu, opts.stop, truth);
    if (rep.trajectory.reason == StopReason::Diverged)
        throw divergence_error("reconstruct: residual grew by more than 10^3; mu too large");
    rep.final_point = rep.trajectory.iterates.back();
    rep.final_residual = rep.trajectory.residuals.back();
    rep.converged = rep.trajectory.reason == StopReason::Converged;
    if (truth != nullptr) {
        rep.final_chart_error = rep.trajectory.chart_errors.back();
        rep.final_ambient_error = rep.trajectory.ambient_errors.back();
        try {
            rep.rate = rate_fit(rep.trajectory.ambient_errors, cst.alpha, cst.ell);
            rep.rate_available = true;
        } catch (const std::exception&) {
            rep.rate_available = false;
        }
    }
    return rep;
}

}  // namespace invlab::reconstruct
