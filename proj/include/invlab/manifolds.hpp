#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invlab/funcspace.hpp"
#include "invlab/geometry.hpp"

namespace invlab::manifolds {

enum class FamilyTag { Interval, Ball, BallIntensity, Gaussian, Simplex };
const char* family_name(FamilyTag t);
FamilyTag family_from_name(const std::string& name);

// A manifold element in chart coordinates.
//   Interval:      (a, b)
//   Ball:          (a_1..a_n, r)
//   BallIntensity: (a_1..a_n, r, lambda)
//   Gaussian:      (a_1..a_n)
//   Simplex:       vertex matrix, column-major n x (n+1), lexicographic order
struct ModelPoint {
    FamilyTag tag = FamilyTag::Interval;
    int ambient_dim = 1;
    std::vector<double> coords;
};

struct ParamBox {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const std::vector<double>& x, double tol = 0.0) const;
    std::vector<double> centre() const;
    double euclid_diameter() const;
};

struct CompactSetSpec {
    ParamBox box;
    double chart_margin = 0.0;  // chart-Euclidean margin of the box to the chart boundary
    double delta_km = 0.0;      // single-chart separation threshold (ambient units)
};

struct HolderData {
    double alpha = 1.0;
    double ell = 1.0;
    bool ell_estimated = false;
};

class Family {
public:
    FamilyTag tag = FamilyTag::Interval;
    int ambient_dim = 1;
    double p = 1.0;  // ambient L^p exponent

    HolderData holder;
    // Upper modulus of the parametrization: ambient distance <=
    // chart_to_ambient * (chart Euclidean distance)^alpha on the chart.
    // Drives lattice spacing.
    double chart_to_ambient = 1.0;
    bool chart_to_ambient_estimated = false;

    double A = 0.0, rho = 0.0, R = 0.0, eps = 0.0, mu = 0.0;
    geometry::SimplexParams base_simplex;
    double chart_radius = 0.0;  // simplex chart: max vertex displacement from the base

    CompactSetSpec K;

    int chart_dim() const { return K.box.dim(); }

    bool in_chart(const std::vector<double>& coords) const;
    bool in_K(const std::vector<double>& coords) const;

    ModelPoint make_point(std::vector<double> coords) const;

    funcspace::FunctionRep embed(const ModelPoint& x) const;
    ModelPoint chart_coords(const funcspace::FunctionRep& f) const;

    double ambient_distance(const ModelPoint& x, const ModelPoint& y) const;
    double ambient_distance(const ModelPoint& x, const ModelPoint& y, double p_override) const;

    HolderData holder_data() const { return holder; }

    // Deterministic quasi-uniform sample of K: the box centre first (skipped
    // if the family constraint rejects it), then Halton points offset by the
    // seed, filtered by the constraint.
    std::vector<ModelPoint> sample_compact(long count, std::uint64_t seed) const;

    // Box clamp plus minimal constraint repair; used to keep perturbed
    // iterates inside K.
    std::vector<double> clamp_to_K(std::vector<double> coords, bool* clamped = nullptr) const;
};

Family make_interval_family(double eps, double p = 1.0);
Family make_ball_family(int n, double A, double rho, double R, double p);
Family make_ball_intensity_family(int n, double A, double rho, double R);
Family make_gaussian_family(int n, double A, double p);
// K is the box of vertex matrices within `k_halfwidth` of the base simplex,
// coordinate-wise; mu bounds pairwise vertex distances.
Family make_simplex_family(const geometry::SimplexParams& base, double mu, double k_halfwidth);

// z -> 2 exp(-|z - centre|^2) <z - centre, direction>, the derivative of the
// Gaussian parametrization at `centre` along `direction`.
funcspace::FunctionRep gaussian_chart_derivative(const std::vector<double>& centre,
                                                 const std::vector<double>& direction);

}  // namespace invlab::manifolds
