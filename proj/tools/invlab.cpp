// Command-line front end: symmetric-difference geometry, stability sweeps,
// bandwidth scans, lattice tables and global reconstruction runs, with
// deterministic CSV/JSON reports.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "invlab/io.hpp"

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace invlab;

namespace {

struct CliError {
    int code;
    std::string message;
};

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw invalid_input("config: unknown key '" + it.key() + "' in " + where);
    }
}

manifolds::Family family_from_config(const json& j) {
    require(j.contains("family"), "config: missing 'family'");
    const json& f = j.at("family");
    reject_unknown_keys(f, {"tag", "eps", "p", "n", "A", "rho", "R", "mu", "k_halfwidth",
                            "base_simplex"},
                        "family");
    std::string tag = f.at("tag").get<std::string>();
    switch (manifolds::family_from_name(tag)) {
        case manifolds::FamilyTag::Interval:
            return manifolds::make_interval_family(f.at("eps").get<double>(),
                                                   f.value("p", 1.0));
        case manifolds::FamilyTag::Ball:
            return manifolds::make_ball_family(f.at("n").get<int>(), f.at("A").get<double>(),
                                               f.at("rho").get<double>(), f.at("R").get<double>(),
                                               f.value("p", 1.0));
        case manifolds::FamilyTag::BallIntensity:
            return manifolds::make_ball_intensity_family(f.at("n").get<int>(),
                                                         f.at("A").get<double>(),
                                                         f.at("rho").get<double>(),
                                                         f.at("R").get<double>());
        case manifolds::FamilyTag::Gaussian:
            return manifolds::make_gaussian_family(f.at("n").get<int>(), f.at("A").get<double>(),
                                                   f.value("p", 2.0));
        default: {
            auto verts = f.at("base_simplex").get<std::vector<double>>();
            int n = f.at("n").get<int>();
            require(static_cast<int>(verts.size()) == n * (n + 1),
                    "config: base_simplex needs n*(n+1) entries");
            return manifolds::make_simplex_family(geometry::SimplexParams{n, verts},
                                                  f.at("mu").get<double>(),
                                                  f.at("k_halfwidth").get<double>());
        }
    }
}

struct CommonConfig {
    json raw;
    manifolds::Family family;
    forward::ForwardOp op;
    int N = 16;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string format = "csv";
};

int env_workers() {
    const char* env = std::getenv("INVLAB_WORKERS");
    if (env == nullptr) return 1;
    int w = std::atoi(env);
    return w >= 1 ? w : 1;
}

CommonConfig load_config(const std::string& path, const std::vector<std::string>& extra_keys) {
    CommonConfig cfg{.family = manifolds::make_interval_family(0.1)};
    std::string text = io::read_file(path);
    json j = json::parse(text, nullptr, true, false);
    std::vector<std::string> allowed = {"family", "op", "N", "seed", "workers", "format"};
    allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
    reject_unknown_keys(j, allowed, "top level");
    cfg.raw = j;
    cfg.family = family_from_config(j);
    cfg.op.kind = forward::forward_from_name(j.value("op", std::string("identity")));
    cfg.N = j.value("N", 16);
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(1));
    cfg.workers = j.value("workers", 0);
    if (cfg.workers < 1) cfg.workers = env_workers();
    cfg.format = j.value("format", std::string("csv"));
    require(cfg.format == "csv" || cfg.format == "json", "config: format must be csv or json");
    return cfg;
}

void emit(const std::string& out_dir, const std::string& stem, const std::string& format,
          const ordered_json& as_json, const std::string& as_csv) {
    fs::create_directories(out_dir);
    if (format == "json") {
        io::write_file((fs::path(out_dir) / (stem + ".json")).string(), as_json.dump(2) + "\n");
    } else {
        io::write_file((fs::path(out_dir) / (stem + ".csv")).string(), as_csv);
    }
}

std::vector<double> parse_vector(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

int cmd_symmdiff(const std::string& c1, double r1, const std::string& c2, double r2, int n,
                 const std::string& s1, const std::string& s2, double A, double rho, double R,
                 long samples, std::uint64_t seed, int workers, const std::string& out_dir,
                 const std::string& format) {
    ordered_json j;
    std::string csv;
    if (!s1.empty() || !s2.empty()) {
        require(!s1.empty() && !s2.empty(), "symmdiff: need both --simplex1 and --simplex2");
        geometry::SimplexParams t1{n, parse_vector(s1)}, t2{n, parse_vector(s2)};
        double exact = geometry::simplex_symmdiff(t1, t2);
        auto mc = geometry::simplex_symmdiff_montecarlo(t1, t2, samples, seed);
        j["kind"] = "simplex";
        j["n"] = n;
        j["exact_or_clipped"] = exact;
        j["mc_estimate"] = mc.estimate;
        j["mc_stderr"] = mc.stderr_;
        csv = "kind,n,exact,mc_estimate,mc_stderr\nsimplex," + std::to_string(n) + "," +
              io::fmt17(exact) + "," + io::fmt17(mc.estimate) + "," + io::fmt17(mc.stderr_) + "\n";
        std::cout << "simplex symmdiff: exact=" << io::fmt17(exact)
                  << " mc=" << io::fmt17(mc.estimate) << " stderr=" << io::fmt17(mc.stderr_)
                  << "\n";
    } else {
        geometry::BallParams b1{parse_vector(c1), r1}, b2{parse_vector(c2), r2};
        double exact = geometry::ball_symmdiff_exact(b1, b2, n);
        auto mc = geometry::ball_symmdiff_montecarlo(b1, b2, n, samples, seed, workers);
        auto cert = geometry::bilip_certify(b1, b2, n, A, rho, R);
        j["kind"] = "ball";
        j["n"] = n;
        j["exact"] = exact;
        j["mc_estimate"] = mc.estimate;
        j["mc_stderr"] = mc.stderr_;
        j["certify"] = io::bound_report_json(cert);
        csv = "kind,n,exact,mc_estimate,mc_stderr\nball," + std::to_string(n) + "," +
              io::fmt17(exact) + "," + io::fmt17(mc.estimate) + "," + io::fmt17(mc.stderr_) +
              "\n\n" + io::bound_report_csv_header() + io::bound_report_csv(cert);
        std::cout << "ball symmdiff: exact=" << io::fmt17(exact)
                  << " mc=" << io::fmt17(mc.estimate) << " stderr=" << io::fmt17(mc.stderr_)
                  << " case=" << geometry::ball_case_name(cert.case_)
                  << " certify=" << (cert.pass ? "pass" : "FAIL") << "\n";
        if (!cert.pass) throw CliError{3, "certifier bounds violated"};
    }
    emit(out_dir, "symmdiff", format, j, csv);
    return 0;
}

int cmd_stability(const CommonConfig& cfg, const std::string& out_dir) {
    const json& j = cfg.raw;
    long pairs = j.value("pairs", 10000L);
    double alpha = j.value("alpha", 0.0);
    if (alpha <= 0.0) alpha = cfg.family.holder.alpha;
    double cutoff = j.value("near_cutoff", 1e-2);
    bool persist_pairs = j.value("persist_pairs", false);

    std::vector<stabilitylab::PairSample> samples;
    auto rep = stabilitylab::empirical_stability(cfg.family, cfg.op, pairs, cfg.seed, alpha,
                                                 cutoff, cfg.workers,
                                                 persist_pairs ? &samples : nullptr);
    emit(out_dir, "stability_unprojected", cfg.format, io::stability_json(rep),
         io::stability_csv(rep));
    std::cout << "unprojected: C_hat=" << io::fmt17(rep.C_hat)
              << " alpha_hat=" << io::fmt17(rep.alpha_hat) << " L_hat=" << io::fmt17(rep.L_hat)
              << "\n";
    bool unstable = !std::isfinite(rep.C_hat) ||
                    (rep.near_count >= 8 && (rep.alpha_hat <= 0.0 || rep.alpha_hat > 1.2));
    if (persist_pairs) {
        std::string pcsv = "x...,y...,chart_dist,ambient_dist,image_dist\n";
        for (const auto& ps : samples) {
            pcsv += io::csv_row(ps.x) + "," + io::csv_row(ps.y) + "," + io::fmt17(ps.chart_dist) +
                    "," + io::fmt17(ps.ambient_dist) + "," + io::fmt17(ps.image_dist) + "\n";
        }
        io::write_file((fs::path(out_dir) / "stability_pairs.csv").string(), pcsv);
    }
    if (j.contains("N")) {
        auto repn = stabilitylab::projected_stability(cfg.family, cfg.op, cfg.N, pairs,
                                                      cfg.seed + 1, alpha, cutoff, cfg.workers);
        emit(out_dir, "stability_projected_N" + std::to_string(cfg.N), cfg.format,
             io::stability_json(repn), io::stability_csv(repn));
        std::cout << "projected N=" << cfg.N << ": C_hat=" << io::fmt17(repn.C_hat)
                  << " L_hat=" << io::fmt17(repn.L_hat) << "\n";
        unstable = unstable || !std::isfinite(repn.C_hat);
    }
    if (unstable) throw CliError{3, "unstable configuration flagged"};
    return 0;
}

int cmd_find_n(const CommonConfig& cfg, const std::string& out_dir) {
    const json& j = cfg.raw;
    require(j.contains("delta"), "config: find-n needs 'delta'");
    double delta = j.at("delta").get<double>();
    double C;
    if (j.contains("C")) {
        C = j.at("C").get<double>();
    } else {
        long pairs = j.value("pairs", 4000L);
        auto rep = stabilitylab::empirical_stability(cfg.family, cfg.op, pairs, cfg.seed,
                                                     cfg.family.holder.alpha, 1e-2, cfg.workers);
        C = 2.0 * rep.C_hat;
    }
    std::vector<int> grid = j.value("N_grid", std::vector<int>{4, 8, 16, 32, 64, 128});
    long samples = j.value("deficit_samples", 200L);
    auto scan = stabilitylab::find_sufficient_N(cfg.family, cfg.op, C, delta, grid, samples,
                                                cfg.seed, cfg.workers);
    emit(out_dir, "deficit_scan", cfg.format, io::deficit_scan_json(scan),
         io::deficit_scan_csv(scan));
    for (size_t i = 0; i < scan.grid.size(); ++i)
        std::cout << "N=" << scan.grid[i] << " deficit=" << io::fmt17(scan.deficits[i]) << "\n";
    std::cout << "threshold=" << io::fmt17(scan.threshold)
              << (scan.found ? " N*=" + std::to_string(scan.n_star) : " grid exhausted") << "\n";
    if (!scan.found) throw CliError{3, "deficit grid exhausted without meeting the threshold"};
    return 0;
}

reconstruct::ReconstructOptions options_from_config(const json& j, const CommonConfig& cfg) {
    reconstruct::ReconstructOptions opts;
    opts.seed = cfg.seed;
    opts.workers = cfg.workers;
    if (j.contains("stop")) {
        reject_unknown_keys(j.at("stop"), {"tol", "max_iters"}, "stop");
        opts.stop.tol = j.at("stop").value("tol", 1e-9);
        opts.stop.max_iters = j.at("stop").value("max_iters", 100000L);
    }
    opts.stability_pairs = j.value("stability_pairs", 4000L);
    opts.argmin_initial = j.value("argmin_initial", false);
    opts.max_lattice_points = j.value("max_lattice_points", 50000000L);
    if (j.contains("constants")) {
        const json& c = j.at("constants");
        reject_unknown_keys(c, {"C", "L_FK", "rho_basin", "mu_step", "delta_km"}, "constants");
        if (c.contains("C") && !c.at("C").is_null()) opts.C_override = c.at("C").get<double>();
        if (c.contains("L_FK") && !c.at("L_FK").is_null())
            opts.L_override = c.at("L_FK").get<double>();
        if (c.contains("rho_basin") && !c.at("rho_basin").is_null())
            opts.rho_override = c.at("rho_basin").get<double>();
        if (c.contains("mu_step") && !c.at("mu_step").is_null())
            opts.mu_override = c.at("mu_step").get<double>();
        if (c.contains("delta_km") && !c.at("delta_km").is_null())
            opts.delta_km_override = c.at("delta_km").get<double>();
    }
    return opts;
}

int cmd_reconstruct(const CommonConfig& cfg, const std::string& out_dir) {
    const json& j = cfg.raw;
    measurement::MeasurementOperator q(cfg.family, cfg.op, cfg.N);
    std::optional<std::vector<double>> truth;
    measurement::Measurement m_dag;
    if (j.contains("truth")) {
        truth = j.at("truth").get<std::vector<double>>();
        m_dag = q.measure(*truth);
    } else {
        require(j.contains("measurement_file"),
                "config: reconstruct needs 'truth' or 'measurement_file'");
        std::string text = io::read_file(j.at("measurement_file").get<std::string>());
        m_dag = measurement::measurement_from_csv(text.substr(0, text.find('\n')));
        require(static_cast<long>(m_dag.coeffs.size()) == q.dim(),
                "measurement file does not match the configured bandwidth");
    }
    std::optional<reconstruct::LatticeTable> table;
    if (j.contains("table_file"))
        table = reconstruct::load_lattice(j.at("table_file").get<std::string>());

    auto opts = options_from_config(j, cfg);
    auto rep = reconstruct::reconstruct(cfg.family, cfg.op, cfg.N, m_dag, opts,
                                        truth ? &*truth : nullptr, table ? &*table : nullptr);
    fs::create_directories(out_dir);
    if (truth && m_dag.space_dim == 1)
        io::write_file((fs::path(out_dir) / "measurement.csv").string(),
                       measurement::measurement_to_csv(m_dag) + "\n");
    io::write_file((fs::path(out_dir) / "reconstruction.json").string(),
                   io::reconstruction_json(rep).dump(2) + "\n");
    io::write_file((fs::path(out_dir) / "trajectory.csv").string(),
                   io::trajectory_csv(rep.trajectory));
    std::cout << "x0 index " << rep.x0.index << " residual " << io::fmt17(rep.x0.residual)
              << "; " << rep.trajectory.iterates.size() << " iterates, "
              << reconstruct::stop_reason_name(rep.trajectory.reason) << ", final residual "
              << io::fmt17(rep.final_residual) << "\n";
    if (!rep.converged) throw CliError{1, "did not reach the residual tolerance"};
    return 0;
}

int cmd_table(const CommonConfig& cfg, const std::string& out_dir) {
    const json& j = cfg.raw;
    require(j.contains("lattice_r"), "config: table needs 'lattice_r'");
    double r = j.at("lattice_r").get<double>();
    long cap = j.value("max_table_points", 1000000L);
    auto table = reconstruct::build_lattice(cfg.family, cfg.op, r, cfg.N, cfg.seed, cfg.workers,
                                            cap);
    fs::create_directories(out_dir);
    std::string path = (fs::path(out_dir) / j.value("table_name", std::string("lattice.tbl")))
                           .string();
    reconstruct::save_lattice(table, path);
    std::cout << "lattice: " << table.points.size() << " points, r=" << io::fmt17(r) << " -> "
              << path << "\n";
    return 0;
}

int cmd_counterexample(const std::string& which, double alpha, long k_max,
                       const std::string& t_list, const std::string& out_dir,
                       const std::string& format) {
    ordered_json j;
    std::string csv;
    if (which == "sin") {
        std::vector<long> ks;
        for (long k = 1; k <= k_max; ++k) ks.push_back(k);
        auto vals = stabilitylab::counterexample_sin(ks);
        csv = "k,derivative,reference\n";
        ordered_json rows = ordered_json::array();
        for (size_t i = 0; i < ks.size(); ++i) {
            double ref = 1.0 / (static_cast<double>(ks[i]) * kPi);
            csv += std::to_string(ks[i]) + "," + io::fmt17(vals[i]) + "," + io::fmt17(ref) + "\n";
            rows.push_back({{"k", ks[i]}, {"derivative", vals[i]}, {"reference", ref}});
        }
        j["kind"] = "sin";
        j["rows"] = rows;
        std::cout << "sin example: k=1 -> " << io::fmt17(vals.front()) << ", k=" << k_max
                  << " -> " << io::fmt17(vals.back()) << "\n";
    } else if (which == "weight") {
        std::vector<double> ts =
            t_list.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.025} : parse_vector(t_list);
        auto rows = stabilitylab::counterexample_weight(ts, alpha);
        csv = "t,numerator,denominator,ratio,bound\n";
        ordered_json jr = ordered_json::array();
        for (const auto& w : rows) {
            csv += io::fmt17(w.t) + "," + io::fmt17(w.numerator) + "," + io::fmt17(w.denominator) +
                   "," + io::fmt17(w.ratio) + "," + io::fmt17(w.bound) + "\n";
            jr.push_back({{"t", w.t},
                          {"numerator", w.numerator},
                          {"denominator", w.denominator},
                          {"ratio", w.ratio},
                          {"bound", w.bound}});
            std::cout << "t=" << io::fmt17(w.t) << " ratio=" << io::fmt17(w.ratio)
                      << " bound=" << io::fmt17(w.bound) << "\n";
        }
        j["kind"] = "weight";
        j["alpha"] = alpha;
        j["rows"] = jr;
    } else {
        throw invalid_input("counterexample: --which must be sin or weight");
    }
    emit(out_dir, "counterexample_" + which, format, j, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Manifold-constrained inverse problem laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format_flag, c1 = "0", c2 = "0", s1, s2, which = "sin",
                t_list;
    double r1 = 1.0, r2 = 1.0, A = 2.0, rho = 0.5, R = 2.0, alpha = 1.0;
    int n = 2, workers_flag = 0;
    long samples = 1000000, k_max = 10;
    std::uint64_t seed_flag = 0;
    bool seed_set = false, workers_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--format", format_flag, "Output format: csv or json");
        cmd->add_option("--seed", seed_flag, "Seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--workers", workers_flag, "Worker count override")
            ->each([&](const std::string&) { workers_set = true; });
    };

    auto* sd = app.add_subcommand("symmdiff", "Symmetric-difference volumes and certification");
    sd->add_option("--n", n, "Ambient dimension");
    sd->add_option("--c1", c1, "First ball centre, comma separated");
    sd->add_option("--r1", r1, "First ball radius");
    sd->add_option("--c2", c2, "Second ball centre");
    sd->add_option("--r2", r2, "Second ball radius");
    sd->add_option("--simplex1", s1, "First simplex vertices, column-major");
    sd->add_option("--simplex2", s2, "Second simplex vertices, column-major");
    sd->add_option("--A", A, "Admissible centre bound");
    sd->add_option("--rho", rho, "Admissible radius lower bound");
    sd->add_option("--R", R, "Admissible radius upper bound");
    sd->add_option("--mc-samples", samples, "Monte Carlo samples");
    add_common(sd);

    auto* st = app.add_subcommand("stability", "Empirical stability constants and exponents");
    st->add_option("--config", config_path, "Config file")->required();
    add_common(st);

    auto* fn = app.add_subcommand("find-n", "Projection-deficit bandwidth scan");
    fn->add_option("--config", config_path, "Config file")->required();
    add_common(fn);

    auto* rc = app.add_subcommand("reconstruct", "Global reconstruction pipeline");
    rc->add_option("--config", config_path, "Config file")->required();
    add_common(rc);

    auto* tb = app.add_subcommand("table", "Build and persist an offline lattice table");
    tb->add_option("--config", config_path, "Config file")->required();
    add_common(tb);

    auto* ce = app.add_subcommand("counterexample", "Instability example sweeps");
    ce->add_option("--which", which, "sin or weight");
    ce->add_option("--alpha", alpha, "Holder exponent for the weight example");
    ce->add_option("--k-max", k_max, "Largest k for the sin example");
    ce->add_option("--t-list", t_list, "Comma-separated t values for the weight example");
    add_common(ce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sd->parsed()) {
            std::uint64_t seed = seed_set ? seed_flag : 1;
            int workers = workers_set ? workers_flag : env_workers();
            return cmd_symmdiff(c1, r1, c2, r2, n, s1, s2, A, rho, R, samples, seed, workers,
                                out_dir, format_flag.empty() ? "csv" : format_flag);
        }
        if (ce->parsed())
            return cmd_counterexample(which, alpha, k_max, t_list, out_dir,
                                      format_flag.empty() ? "csv" : format_flag);

        std::vector<std::string> extra;
        if (st->parsed()) extra = {"pairs", "alpha", "near_cutoff", "persist_pairs"};
        if (fn->parsed()) extra = {"delta", "C", "N_grid", "deficit_samples", "pairs"};
        if (rc->parsed())
            extra = {"truth", "measurement_file", "table_file", "stop", "constants",
                     "stability_pairs", "argmin_initial", "max_lattice_points"};
        if (tb->parsed()) extra = {"lattice_r", "max_table_points", "table_name"};
        CommonConfig cfg = load_config(config_path, extra);
        if (seed_set) cfg.seed = seed_flag;
        if (workers_set && workers_flag >= 1) cfg.workers = workers_flag;
        if (!format_flag.empty()) {
            require(format_flag == "csv" || format_flag == "json",
                    "--format must be csv or json");
            cfg.format = format_flag;
        }
        if (st->parsed()) return cmd_stability(cfg, out_dir);
        if (fn->parsed()) return cmd_find_n(cfg, out_dir);
        if (rc->parsed()) return cmd_reconstruct(cfg, out_dir);
        if (tb->parsed()) return cmd_table(cfg, out_dir);
        return 2;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const reconstruct::no_initial_guess& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const reconstruct::divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
