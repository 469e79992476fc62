#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "invlab/common.hpp"

namespace invlab::funcspace {

enum class DomainKind { UnitInterval, Euclidean };

struct Domain {
    DomainKind kind = DomainKind::UnitInterval;
    int dim = 1;
    bool operator==(const Domain& o) const { return kind == o.kind && dim == o.dim; }
};

// Indicator of [a, b) scaled by `intensity` on [0, 1]. The half-open
// convention fixes pointwise evaluation; it is invisible to every L^p
// quantity.
struct IntervalIndicator {
    double a = 0.0;
    double b = 1.0;
    double intensity = 1.0;
};

// Piecewise-linear function covering [0, 1]: value slope[i]*t + offset[i] on
// [breaks[i], breaks[i+1]).
struct PiecewiseLinear {
    std::vector<double> breaks;
    std::vector<double> slope;
    std::vector<double> offset;
};

// intensity * indicator of the closed ball B(centre, radius) in R^n.
struct BallIndicator {
    std::vector<double> centre;
    double radius = 1.0;
    double intensity = 1.0;
};

// z -> exp(-|z - centre|^2) on R^n.
struct GaussianBump {
    std::vector<double> centre;
};

// z -> 2 exp(-|z - centre|^2) <z - centre, direction>; the directional
// derivative of the Gaussian bump with respect to its centre.
struct GaussianDirectional {
    std::vector<double> centre;
    std::vector<double> direction;
};

// Indicator of the simplex with the given vertices (n x (n+1), column-major).
struct SimplexIndicator {
    int n = 2;
    std::vector<double> vertices;
};

// Uniform samples on [0, 1] with linear interpolation between nodes.
struct SampledGrid {
    std::vector<double> values;
};

struct FunctionRep {
    std::variant<IntervalIndicator, PiecewiseLinear, BallIndicator, GaussianBump,
                 GaussianDirectional, SimplexIndicator, SampledGrid>
        node;
    Domain domain() const;
};

FunctionRep make_interval_indicator(double a, double b, double intensity = 1.0);
FunctionRep make_piecewise_linear(std::vector<double> breaks, std::vector<double> slope,
                                  std::vector<double> offset);
FunctionRep make_ball_indicator(std::vector<double> centre, double radius,
                                double intensity = 1.0);
FunctionRep make_gaussian(std::vector<double> centre);
FunctionRep make_gaussian_directional(std::vector<double> centre, std::vector<double> direction);
FunctionRep make_simplex_indicator(int n, std::vector<double> vertices);
FunctionRep make_sampled_grid(std::vector<double> values);

// Pointwise value; `point` must match the domain dimension. Throws on points
// outside the domain of definition.
double evaluate(const FunctionRep& f, const std::vector<double>& point);
double evaluate1(const FunctionRep& f, double t);

// Use p = infinity() for the sup norm of bounded closed-form kinds.
double lp_norm(const FunctionRep& f, double p);

// A metric on each domain; exact for indicator pairs (via symmetric-difference
// volumes) and piecewise-linear pairs, quadrature elsewhere.
double lp_distance(const FunctionRep& f, const FunctionRep& g, double p);

// c_k = int_0^1 f(t) e^{-2 pi i k t} dt for k = -K..K (index k + K).
// Closed form for interval indicators and piecewise-linear kinds; adaptive
// panel quadrature otherwise. Conjugate symmetry is exact by construction.
std::vector<std::complex<double>> fourier_coefficients(const FunctionRep& f, int K);

// Conversion of unit-interval kinds to the common piecewise-linear form.
PiecewiseLinear to_piecewise_linear(const FunctionRep& f);
PiecewiseLinear pwl_subtract(const PiecewiseLinear& f, const PiecewiseLinear& g);
double pwl_lp_norm(const PiecewiseLinear& f, double p);

// Breakpoints where a unit-interval representation is non-smooth.
std::vector<double> breakpoints(const FunctionRep& f);

}  // namespace invlab::funcspace
