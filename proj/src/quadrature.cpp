#include "invlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "invlab/common.hpp"

namespace invlab {

static GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-angle initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<size_t>(i)] = x;
        rule.weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

const GaussRule& gauss_legendre(int order) {
    require(order >= 1 && order <= 128, "gauss_legendre: order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels, int order) {
    if (a == b) return 0.0;
    const GaussRule& g = gauss_legendre(order);
    double total = 0.0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * w;
        double mid = lo + 0.5 * w, half = 0.5 * w;
        for (size_t q = 0; q < g.nodes.size(); ++q)
            total += g.weights[q] * half * f(mid + half * g.nodes[q]);
    }
    return total;
}

double integrate_split(const std::function<double(double)>& f,
                       const std::vector<double>& splits,
                       int panels_per_gap, int order) {
    require(splits.size() >= 2, "integrate_split: need at least two boundaries");
    std::vector<double> pts = splits;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], panels_per_gap, order);
    return total;
}

double integrate_box(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& lo, const std::vector<double>& hi,
                     int panels_per_dim, int order) {
    int dim = static_cast<int>(lo.size());
    require(dim >= 1 && dim <= 3 && hi.size() == lo.size(), "integrate_box: dim must be 1..3");
    const GaussRule& g = gauss_legendre(order);
    int per_dim = panels_per_dim * order;
    std::vector<std::vector<double>> nodes(static_cast<size_t>(dim)), weights(static_cast<size_t>(dim));
    for (int d = 0; d < dim; ++d) {
        double w = (hi[static_cast<size_t>(d)] - lo[static_cast<size_t>(d)]) / panels_per_dim;
        for (int p = 0; p < panels_per_dim; ++p) {
            double start = lo[static_cast<size_t>(d)] + p * w;
            double mid = start + 0.5 * w, half = 0.5 * w;
            for (int q = 0; q < order; ++q) {
                nodes[static_cast<size_t>(d)].push_back(mid + half * g.nodes[static_cast<size_t>(q)]);
                weights[static_cast<size_t>(d)].push_back(half * g.weights[static_cast<size_t>(q)]);
            }
        }
    }
    std::vector<double> x(static_cast<size_t>(dim));
    double total = 0.0;
    if (dim == 1) {
        for (int i = 0; i < per_dim; ++i) {
            x[0] = nodes[0][static_cast<size_t>(i)];
            total += weights[0][static_cast<size_t>(i)] * f(x);
        }
    } else if (dim == 2) {
        for (int i = 0; i < per_dim; ++i) {
            x[0] = nodes[0][static_cast<size_t>(i)];
            for (int j = 0; j < per_dim; ++j) {
                x[1] = nodes[1][static_cast<size_t>(j)];
                total += weights[0][static_cast<size_t>(i)] * weights[1][static_cast<size_t>(j)] * f(x);
            }
        }
    } else {
        for (int i = 0; i < per_dim; ++i) {
            x[0] = nodes[0][static_cast<size_t>(i)];
            for (int j = 0; j < per_dim; ++j) {
                x[1] = nodes[1][static_cast<size_t>(j)];
                double wij = weights[0][static_cast<size_t>(i)] * weights[1][static_cast<size_t>(j)];
                for (int k = 0; k < per_dim; ++k) {
                    x[2] = nodes[2][static_cast<size_t>(k)];
                    total += wij * weights[2][static_cast<size_t>(k)] * f(x);
                }
            }
        }
    }
    return total;
}

}  // namespace invlab
