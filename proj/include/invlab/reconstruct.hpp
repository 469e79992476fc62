#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "invlab/measurement.hpp"
#include "invlab/stabilitylab.hpp"

namespace invlab::reconstruct {

// Raised when no lattice point meets the selection threshold; the constants
// C or L, or the covering radius, were underestimated.
class no_initial_guess : public numeric_failure {
public:
    using numeric_failure::numeric_failure;
};

// Raised when the residual grows by more than 10^3: the step size is too
// large for the local spectrum.
class divergence_error : public numeric_failure {
public:
    using numeric_failure::numeric_failure;
};

struct StopRule {
    double tol = 1e-9;
    long max_iters = 100000;
};

// r = (1 / (L_FK ||Q||)) * (min{rho*ell, delta_KM} / (2C))^{1/alpha}
double lattice_radius(double L_FK, double q_norm, double rho, double ell, double delta_km,
                      double alpha, double C);

// Chart grid spacing whose ambient covering radius is at most r, via the
// chart-to-ambient modulus of the parametrization.
double chart_spacing_for_radius(const manifolds::Family& family, double r);

struct LatticeGrid {
    std::vector<double> origin;   // first cell centre per axis
    std::vector<double> step;     // per-axis spacing
    std::vector<long> counts;     // per-axis cell counts
    long total = 0;

    std::vector<double> node(long index) const;  // row-major cell centre
};

LatticeGrid plan_lattice(const manifolds::Family& family, double r, long max_points);

struct LatticeTable {
    int version = 1;
    manifolds::FamilyTag family = manifolds::FamilyTag::Interval;
    forward::ForwardKind op = forward::ForwardKind::Integration;
    int ambient_dim = 1;
    double family_p = 1.0;
    manifolds::ParamBox box;
    double r = 0.0;
    int N = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> points;
    std::vector<measurement::Measurement> measurements;
};

// Offline phase: grid nodes clamped onto K, measured in parallel with a
// deterministic index-ordered merge.
LatticeTable build_lattice(const manifolds::Family& family, const forward::ForwardOp& op, double r,
                           int N, std::uint64_t seed, int workers = 1, long max_points = 1000000);

void save_lattice(const LatticeTable& table, const std::string& path);
LatticeTable load_lattice(const std::string& path);

// Probabilistic covering check: max over sampled K points of the ambient
// distance to the nearest lattice point.
double covering_radius_estimate(const manifolds::Family& family, const LatticeTable& table,
                                long samples, std::uint64_t seed);

struct InitialGuess {
    long index = -1;
    std::vector<double> coords;
    double residual = 0.0;
    long scanned = 0;
};

// First lattice point (scan order) whose measured residual beats the
// threshold; optionally the argmin among all satisfying points.
InitialGuess select_initial(const LatticeTable& table, const measurement::Measurement& m_dag,
                            double threshold, bool argmin_mode = false);

// Same scan without materializing the table: nodes are measured on the fly
// and the loop exits at the first hit.
InitialGuess select_initial_streaming(const measurement::MeasurementOperator& q, double r,
                                      const measurement::Measurement& m_dag, double threshold,
                                      long max_points, int workers = 1, bool argmin_mode = false);

enum class StopReason { Converged, MaxIters, Diverged };
const char* stop_reason_name(StopReason r);

struct Trajectory {
    std::vector<std::vector<double>> iterates;
    std::vector<double> residuals;
    std::vector<double> chart_errors;    // per-iterate |h_k - h_dag|, when truth known
    std::vector<double> ambient_errors;  // per-iterate ambient distance, when truth known
    double mu = 0.0;
    StopReason reason = StopReason::MaxIters;
    long clamp_events = 0;
};

Trajectory landweber(const measurement::MeasurementOperator& q, const std::vector<double>& h0,
                     const measurement::Measurement& m_dag, double mu, const StopRule& stop,
                     const std::vector<double>* truth = nullptr);

struct RateFit {
    double c_hat = 0.0;
    double rho_hat = 0.0;
    bool bound_satisfied = false;
    size_t tail_begin = 0;
    size_t tail_len = 0;
};

// Fits the decay rate on the longest strictly decreasing positive tail and
// checks the convergence envelope: rho c^k / ell for alpha = 1, the
// power-law envelope for alpha in (1/2, 1). Configured rho/c take
// precedence over the fitted values in the envelope check.
RateFit rate_fit(const std::vector<double>& errors, double alpha, double ell,
                 double rho_given = std::numeric_limits<double>::quiet_NaN(),
                 double c_given = std::numeric_limits<double>::quiet_NaN());

struct ConstantsReport {
    double C_f = 0.0, C_qnf = 0.0, C_used = 0.0;
    double L_fk = 0.0;
    double rho_basin = 0.0;
    double ell = 0.0, alpha = 1.0;
    double delta_km = 0.0;
    double threshold = 0.0;
    double radius = 0.0;
    double mu = 0.0;
    bool C_overridden = false, L_overridden = false, rho_overridden = false,
         mu_overridden = false, delta_overridden = false;
};

struct ReconstructOptions {
    StopRule stop;
    std::uint64_t seed = 1;
    long stability_pairs = 4000;
    bool argmin_initial = false;
    long max_lattice_points = 50000000;
    int workers = 1;
    // NaN = estimate / family default
    double C_override = std::numeric_limits<double>::quiet_NaN();
    double L_override = std::numeric_limits<double>::quiet_NaN();
    double rho_override = std::numeric_limits<double>::quiet_NaN();
    double mu_override = std::numeric_limits<double>::quiet_NaN();
    double delta_km_override = std::numeric_limits<double>::quiet_NaN();
};

struct ReconstructionReport {
    ConstantsReport constants;
    InitialGuess x0;
    Trajectory trajectory;
    std::vector<double> final_point;
    double final_residual = 0.0;
    double final_chart_error = -1.0;    // -1: truth unknown
    double final_ambient_error = -1.0;  // -1: truth unknown
    bool converged = false;
    bool rate_available = false;
    RateFit rate;
    long lattice_points_scanned = 0;
    bool used_prebuilt_table = false;
};

// End-to-end pipeline: constants acquisition, covering lattice with
// measured nodes (offline or streamed), threshold selection of the initial
// guess, Landweber in chart coordinates, rate fit.
ReconstructionReport reconstruct(const manifolds::Family& family, const forward::ForwardOp& op,
                                 int N, const measurement::Measurement& m_dag,
                                 const ReconstructOptions& opts,
                                 const std::vector<double>* truth = nullptr,
                                 const LatticeTable* table = nullptr);

// Largest chart-space perturbation radius (bisection) from which every
// trial run converges back to its truth; the source of the stored basin
// defaults.
double calibrate_basin(const manifolds::Family& family, const forward::ForwardOp& op, int N,
                       int trials, std::uint64_t seed, const StopRule& stop = StopRule{});

// Stored per-family basin radii from calibration runs; chart units.
double default_basin_radius(const manifolds::Family& family);

}  // namespace invlab::reconstruct
