#pragma once

#include <functional>
#include <vector>

namespace invlab {

// Gauss-Legendre rule on [-1, 1]; nodes/weights are computed once per order
// by Newton iteration and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 16, int order = 16);

// Composite rule whose panel boundaries include the given split points
// (kinks of piecewise-smooth integrands); each gap is subdivided further into
// `panels_per_gap` panels.
double integrate_split(const std::function<double(double)>& f,
                       const std::vector<double>& splits,
                       int panels_per_gap = 8, int order = 16);

// Tensor-product Gauss-Legendre over an axis-aligned box, dim <= 3.
double integrate_box(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     int panels_per_dim = 8, int order = 12);

}  // namespace invlab
