#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "invlab/common.hpp"

namespace invlab::geometry {

struct BallParams {
    std::vector<double> centre;
    double radius = 1.0;
};

// Vertices of a nondegenerate n-simplex as an n x (n+1) column-major matrix.
struct SimplexParams {
    int n = 2;
    std::vector<double> vertices;

    std::vector<double> vertex(int j) const;
};

double ball_volume(int n, double r);

// Volume of B(0,r1) ∩ B(d e1, r2); covers nested and disjoint configurations.
double ball_intersection_volume(int n, double r1, double r2, double d);

// |B1 △ B2|, exact: disjoint -> volume sum, nested -> volume difference,
// overlapping -> volumes minus twice the lens (two spherical caps). Tangency
// |a1-a2| = r1+r2 is assigned to the disjoint branch (the lens has measure
// zero there).
double ball_symmdiff_exact(const BallParams& b1, const BallParams& b2, int n);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

McEstimate ball_symmdiff_montecarlo(const BallParams& b1, const BallParams& b2, int n,
                                    long samples, std::uint64_t seed, int workers = 1);

// Lexicographically sorted copy of the vertex columns.
SimplexParams sort_vertices(const SimplexParams& s);

double simplex_volume(const SimplexParams& s);

// |T1 △ T2|: exact convex clipping for n = 2, Monte Carlo with barycentric
// membership tests for n >= 3.
double simplex_symmdiff(const SimplexParams& s1, const SimplexParams& s2,
                        long mc_samples = 200000, std::uint64_t mc_seed = 0x51d7u);

McEstimate simplex_symmdiff_montecarlo(const SimplexParams& s1, const SimplexParams& s2,
                                       long samples, std::uint64_t seed);

// Sutherland-Hodgman clip of a convex subject polygon against a convex clip
// polygon (both CCW); returns the intersection polygon.
std::vector<std::array<double, 2>> clip_convex(const std::vector<std::array<double, 2>>& subject,
                                               const std::vector<std::array<double, 2>>& clip);
double polygon_area(const std::vector<std::array<double, 2>>& poly);

enum class BallCase { Disjoint, Nested, LensFar, LensNear, Degenerate };
const char* ball_case_name(BallCase c);

// Two-sided comparison of |B1 △ B2| against the parameter distance
// |a1-a2| + |r1-r2|, with per-case proof constants on the admissible box
// |a| <= A, r in [rho, R].
struct BoundReport {
    BallCase case_ = BallCase::Degenerate;
    double lower_const = 0.0;
    double upper_const = 0.0;
    double param_dist = 0.0;   // |a1-a2| + |r1-r2|
    double symmdiff = 0.0;
    double ratio = 0.0;        // symmdiff / param_dist
    bool ratio_defined = false;
    bool pass = false;
    // Norm-equivalence constant used in the disjoint-case lower bound
    // (sum norm against the Euclidean norm on R^{n+1}) and the diameter of
    // the admissible parameter box it multiplies.
    double norm_equiv_c = 0.0;
    double diam_box = 0.0;
};

BoundReport bilip_certify(const BallParams& b1, const BallParams& b2, int n,
                          double A, double rho, double R);

}  // namespace invlab::geometry
