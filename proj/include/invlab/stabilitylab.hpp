#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "invlab/forward.hpp"
#include "invlab/manifolds.hpp"

namespace invlab::stabilitylab {

struct PairSample {
    std::vector<double> x, y;
    double chart_dist = 0.0;    // Euclidean distance of chart coordinates
    double ambient_dist = 0.0;  // L^p distance of the embedded functions
    double image_dist = 0.0;    // distance of the (possibly projected) forward images
};

struct StabilityReport {
    manifolds::FamilyTag family = manifolds::FamilyTag::Interval;
    forward::ForwardKind op = forward::ForwardKind::Identity;
    double p = 1.0;
    int N = -1;  // -1: unprojected forward images
    long pairs = 0;
    std::uint64_t seed = 0;
    double alpha_assumed = 1.0;

    // sup (and 99th percentile) of ambient_dist / image_dist^alpha; a lower
    // estimate of the true stability constant.
    double C_hat = 0.0;
    double C_p99 = 0.0;
    // sup image_dist / ambient_dist: empirical forward Lipschitz constant.
    double L_hat = 0.0;

    // Near-pair log-log regression slope of ambient against chart distance;
    // recovers the chart Holder exponent of the family.
    double alpha_hat = 0.0;
    long near_count = 0;
    double near_cutoff = 1e-2;
    double ambient_diameter = 0.0;  // largest ambient distance seen
};

// Mixed far/near pair sweep of the stability ratios of F on K.
StabilityReport empirical_stability(const manifolds::Family& family, const forward::ForwardOp& op,
                                    long pairs, std::uint64_t seed, double alpha,
                                    double near_cutoff = 1e-2, int workers = 1,
                                    std::vector<PairSample>* persist = nullptr);

// Same sweep against the measured images Q_N F in the Parseval norm.
StabilityReport projected_stability(const manifolds::Family& family, const forward::ForwardOp& op,
                                    int N, long pairs, std::uint64_t seed, double alpha,
                                    double near_cutoff = 1e-2, int workers = 1,
                                    std::vector<PairSample>* persist = nullptr);

struct DeficitScan {
    std::vector<int> grid;
    std::vector<double> deficits;
    double threshold = 0.0;  // delta / (4 C)
    int n_star = -1;         // smallest grid N meeting the threshold, -1 if exhausted
    bool found = false;
};

// Scans the projection deficit over the N grid until it falls below
// delta/(4C). The full curve is reported either way.
DeficitScan find_sufficient_N(const manifolds::Family& family, const forward::ForwardOp& op,
                              double C, double delta, const std::vector<int>& N_grid,
                              long sample_count, std::uint64_t seed, int workers = 1);

// d/dx of x^2 (sign x + sin 1/x) + x, away from zero.
double sin_example_derivative(double x);

// Values of that derivative along x_k = 1/(2 k pi), where the oscillatory
// terms vanish identically; the phase 1/x_k = 2 k pi is reduced exactly
// rather than evaluated in floating point, so the result is 2 x_k = 1/(k pi)
// up to rounding of x_k itself.
std::vector<double> counterexample_sin(const std::vector<long>& k_list);

struct WeightRatio {
    double t = 0.0;
    double numerator = 0.0;    // || F(phi^{-1}(t)) - F(phi^{-1}(0)) ||_1 = 2 int_0^t g
    double denominator = 0.0;  // || phi^{-1}(t) - phi^{-1}(0) ||_1 = 2 min(1, t)
    double ratio = 0.0;        // numerator^alpha / denominator
    double bound = 0.0;        // 2^{alpha-1} e^{-alpha/t} / t^{1-alpha}
};

// Instability ratios of the multiplication-by-exp(-1/t) operator on the
// translated-indicator family; the ratios vanish as t -> 0 for every
// alpha in (0, 1].
std::vector<WeightRatio> counterexample_weight(const std::vector<double>& t_list, double alpha);

}  // namespace invlab::stabilitylab
