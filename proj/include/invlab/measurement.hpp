#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "invlab/forward.hpp"
#include "invlab/manifolds.hpp"

namespace invlab::measurement {

// Fejer-weighted Fourier data in a real Euclidean packing: slot 0 holds the
// mean coefficient, each further frequency contributes sqrt(2)*Re and
// sqrt(2)*Im slots (scaled by period^{dim/2} off the unit circle), so the
// Euclidean inner product of two measurements equals the L^2 inner product
// of the represented smoothed functions.
struct Measurement {
    int N = 0;
    int space_dim = 1;
    double period = 1.0;
    std::vector<double> coeffs;
};

double fejer_weight(int k, int N);

// Projection of a function on [0,1] onto the Fejer means of bandwidth N.
Measurement project_fejer(const funcspace::FunctionRep& f, int N);

double measurement_inner(const Measurement& a, const Measurement& b);
double measurement_norm(const Measurement& a);
Measurement measurement_sub(const Measurement& a, const Measurement& b);

// Pointwise value of the smoothed function represented by a measurement on
// the unit circle (space_dim 1 only).
double fejer_evaluate(const Measurement& m, double t);

// One CSV row: N, then the packed coefficients, 17 significant digits.
std::string measurement_to_csv(const Measurement& m);
Measurement measurement_from_csv(const std::string& line);

// The proven L^1 operator bound of the Fejer projection.
double qn_operator_norm_bound();

// Process-wide count of MeasurementOperator::measure calls; lets tests pin
// down that precomputed lattice tables are never re-measured.
long measure_call_count();

// Robustness-experiment hook, off by default everywhere: additive Gaussian
// noise of the given standard deviation on the packed coefficients.
Measurement add_noise(const Measurement& m, double sigma, std::uint64_t seed);

// Binding of (forward operator, family, bandwidth) into a finite measurement
// map on chart coordinates. Unit-interval families measure on the circle
// [0,1]; Euclidean families (dimension <= 2, Identity only) measure
// Fejer-weighted Fourier coefficients on a torus whose period covers every
// support in K.
class MeasurementOperator {
public:
    MeasurementOperator(const manifolds::Family& family, const forward::ForwardOp& op, int N);

    long dim() const { return dim_; }
    int bandwidth() const { return N_; }
    double period() const { return period_; }
    const manifolds::Family& family() const { return family_; }
    const forward::ForwardOp& op() const { return op_; }

    Measurement measure(const std::vector<double>& h) const;

    // Rows indexed by packed coefficient, columns by chart coordinate.
    // Closed-form coefficient derivatives where available, otherwise central
    // finite differences of measure(); jacobian_fd always differences.
    Matrix jacobian(const std::vector<double>& h) const;
    Matrix jacobian_fd(const std::vector<double>& h) const;
    bool jacobian_is_closed_form() const;

private:
    Measurement measure_interval_closed(const std::vector<double>& h) const;

    manifolds::Family family_;
    forward::ForwardOp op_;
    int N_;
    double period_ = 1.0;
    long dim_ = 0;
    std::vector<std::array<int, 2>> klist_;  // nonzero frequencies, half lattice
};

// sup over a K sample of || F(x) - Q_N F(x) ||_{L^1}; unit-interval families.
double projection_deficit(const forward::ForwardOp& op, const manifolds::Family& family, int N,
                          long sample_count, std::uint64_t seed, int workers = 1);

}  // namespace invlab::measurement
