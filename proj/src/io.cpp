#include "invlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "invlab/forward.hpp"
#include "invlab/manifolds.hpp"

namespace invlab::io {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_row(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += fmt17(values[i]);
    }
    return out;
}

ordered_json stability_json(const stabilitylab::StabilityReport& rep) {
    ordered_json j;
    j["family"] = manifolds::family_name(rep.family);
    j["op"] = forward::forward_name(rep.op);
    j["p"] = rep.p;
    j["N"] = rep.N;
    j["pairs"] = rep.pairs;
    j["seed"] = rep.seed;
    j["alpha_assumed"] = rep.alpha_assumed;
    j["C_hat"] = rep.C_hat;
    j["C_p99"] = rep.C_p99;
    j["L_hat"] = rep.L_hat;
    j["alpha_hat"] = rep.alpha_hat;
    j["near_count"] = rep.near_count;
    j["near_cutoff"] = rep.near_cutoff;
    j["ambient_diameter"] = rep.ambient_diameter;
    return j;
}

std::string stability_csv(const stabilitylab::StabilityReport& rep) {
    std::string out =
        "family,op,p,N,pairs,seed,alpha_assumed,C_hat,C_p99,L_hat,alpha_hat,near_count,near_"
        "cutoff,ambient_diameter\n";
    out += manifolds::family_name(rep.family);
    out += ",";
    out += forward::forward_name(rep.op);
    out += "," + fmt17(rep.p) + "," + std::to_string(rep.N) + "," + std::to_string(rep.pairs) +
           "," + std::to_string(rep.seed) + "," + fmt17(rep.alpha_assumed) + "," +
           fmt17(rep.C_hat) + "," + fmt17(rep.C_p99) + "," + fmt17(rep.L_hat) + "," +
           fmt17(rep.alpha_hat) + "," + std::to_string(rep.near_count) + "," +
           fmt17(rep.near_cutoff) + "," + fmt17(rep.ambient_diameter) + "\n";
    return out;
}

ordered_json bound_report_json(const geometry::BoundReport& rep) {
    ordered_json j;
    j["case"] = geometry::ball_case_name(rep.case_);
    j["lower_const"] = rep.lower_const;
    j["upper_const"] = rep.upper_const;
    j["param_dist"] = rep.param_dist;
    j["symmdiff"] = rep.symmdiff;
    j["ratio_defined"] = rep.ratio_defined;
    j["ratio"] = rep.ratio;
    j["pass"] = rep.pass;
    j["norm_equiv_c"] = rep.norm_equiv_c;
    j["diam_box"] = rep.diam_box;
    return j;
}

std::string bound_report_csv_header() {
    return "case,lower_const,upper_const,param_dist,symmdiff,ratio_defined,ratio,pass,norm_equiv_"
           "c,diam_box\n";
}

std::string bound_report_csv(const geometry::BoundReport& rep) {
    std::string out = geometry::ball_case_name(rep.case_);
    out += "," + fmt17(rep.lower_const) + "," + fmt17(rep.upper_const) + "," +
           fmt17(rep.param_dist) + "," + fmt17(rep.symmdiff) + "," +
           (rep.ratio_defined ? "1" : "0") + "," + fmt17(rep.ratio) + "," +
           (rep.pass ? "1" : "0") + "," + fmt17(rep.norm_equiv_c) + "," + fmt17(rep.diam_box) +
           "\n";
    return out;
}

ordered_json deficit_scan_json(const stabilitylab::DeficitScan& scan) {
    ordered_json j;
    j["grid"] = scan.grid;
    j["deficits"] = scan.deficits;
    j["threshold"] = scan.threshold;
    j["found"] = scan.found;
    j["n_star"] = scan.n_star;
    return j;
}

std::string deficit_scan_csv(const stabilitylab::DeficitScan& scan) {
    std::string out = "N,deficit,threshold\n";
    for (size_t i = 0; i < scan.grid.size(); ++i)
        out += std::to_string(scan.grid[i]) + "," + fmt17(scan.deficits[i]) + "," +
               fmt17(scan.threshold) + "\n";
    return out;
}

ordered_json reconstruction_json(const reconstruct::ReconstructionReport& rep) {
    ordered_json j;
    const auto& c = rep.constants;
    j["constants"] = {{"C_f", c.C_f},
                      {"C_qnf", c.C_qnf},
                      {"C_used", c.C_used},
                      {"C_overridden", c.C_overridden},
                      {"L_fk", c.L_fk},
                      {"L_overridden", c.L_overridden},
                      {"rho_basin", c.rho_basin},
                      {"rho_overridden", c.rho_overridden},
                      {"ell", c.ell},
                      {"alpha", c.alpha},
                      {"delta_km", c.delta_km},
                      {"delta_overridden", c.delta_overridden},
                      {"threshold", c.threshold},
                      {"radius", c.radius},
                      {"mu", c.mu},
                      {"mu_overridden", c.mu_overridden}};
    j["x0"] = {{"index", rep.x0.index},
               {"coords", rep.x0.coords},
               {"residual", rep.x0.residual},
               {"scanned", rep.x0.scanned}};
    j["iterations"] = rep.trajectory.iterates.size();
    j["stop_reason"] = reconstruct::stop_reason_name(rep.trajectory.reason);
    j["clamp_events"] = rep.trajectory.clamp_events;
    j["final_point"] = rep.final_point;
    j["final_residual"] = rep.final_residual;
    j["final_chart_error"] = rep.final_chart_error;
    j["final_ambient_error"] = rep.final_ambient_error;
    j["converged"] = rep.converged;
    j["used_prebuilt_table"] = rep.used_prebuilt_table;
    j["lattice_points_scanned"] = rep.lattice_points_scanned;
    j["rate_available"] = rep.rate_available;
    if (rep.rate_available)
        j["rate"] = {{"c_hat", rep.rate.c_hat},
                     {"rho_hat", rep.rate.rho_hat},
                     {"bound_satisfied", rep.rate.bound_satisfied},
                     {"tail_begin", rep.rate.tail_begin},
                     {"tail_len", rep.rate.tail_len}};
    return j;
}

std::string trajectory_csv(const reconstruct::Trajectory& traj) {
    std::string out = "k,residual";
    const bool with_truth = !traj.chart_errors.empty();
    size_t m = traj.iterates.empty() ? 0 : traj.iterates.front().size();
    for (size_t d = 0; d < m; ++d) out += ",h" + std::to_string(d);
    if (with_truth) out += ",chart_error,ambient_error";
    out += "\n";
    for (size_t k = 0; k < traj.iterates.size(); ++k) {
        out += std::to_string(k) + "," + fmt17(traj.residuals[k]);
        for (double v : traj.iterates[k]) out += "," + fmt17(v);
        if (with_truth)
            out += "," + fmt17(traj.chart_errors[k]) + "," + fmt17(traj.ambient_errors[k]);
        out += "\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "write_file: cannot open " + path);
    out << content;
    require(out.good(), "write_file: write failed for " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "read_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace invlab::io
