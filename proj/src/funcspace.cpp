#include "invlab/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invlab/geometry.hpp"
#include "invlab/quadrature.hpp"
#include "invlab/special.hpp"

namespace invlab::funcspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double vec_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

}  // namespace

Domain FunctionRep::domain() const {
    return std::visit(
        [](const auto& f) -> Domain {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, IntervalIndicator> ||
                          std::is_same_v<T, PiecewiseLinear> || std::is_same_v<T, SampledGrid>) {
                return Domain{DomainKind::UnitInterval, 1};
            } else if constexpr (std::is_same_v<T, BallIndicator> ||
                                 std::is_same_v<T, GaussianBump> ||
                                 std::is_same_v<T, GaussianDirectional>) {
                return Domain{DomainKind::Euclidean, static_cast<int>(f.centre.size())};
            } else {
                return Domain{DomainKind::Euclidean, f.n};
            }
        },
        node);
}

FunctionRep make_interval_indicator(double a, double b, double intensity) {
    require(0.0 <= a && a < b && b <= 1.0, "interval indicator: need 0 <= a < b <= 1");
    require(intensity > 0.0, "interval indicator: intensity > 0");
    return FunctionRep{IntervalIndicator{a, b, intensity}};
}

FunctionRep make_piecewise_linear(std::vector<double> breaks, std::vector<double> slope,
                                  std::vector<double> offset) {
    require(breaks.size() >= 2, "piecewise linear: need >= 2 breakpoints");
    require(breaks.front() == 0.0 && breaks.back() == 1.0,
            "piecewise linear: breakpoints must span [0,1]");
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        require(breaks[i] < breaks[i + 1], "piecewise linear: breakpoints strictly increasing");
    require(slope.size() == breaks.size() - 1 && offset.size() == slope.size(),
            "piecewise linear: piece count mismatch");
    return FunctionRep{PiecewiseLinear{std::move(breaks), std::move(slope), std::move(offset)}};
}

FunctionRep make_ball_indicator(std::vector<double> centre, double radius, double intensity) {
    require(!centre.empty(), "ball indicator: centre dimension >= 1");
    require(radius > 0.0, "ball indicator: radius > 0");
    require(intensity > 0.0, "ball indicator: intensity > 0");
    return FunctionRep{BallIndicator{std::move(centre), radius, intensity}};
}

FunctionRep make_gaussian(std::vector<double> centre) {
    require(!centre.empty(), "gaussian: centre dimension >= 1");
    return FunctionRep{GaussianBump{std::move(centre)}};
}

FunctionRep make_gaussian_directional(std::vector<double> centre, std::vector<double> direction) {
    require(!centre.empty() && centre.size() == direction.size(),
            "gaussian directional: centre/direction dims must match and be >= 1");
    return FunctionRep{GaussianDirectional{std::move(centre), std::move(direction)}};
}

FunctionRep make_simplex_indicator(int n, std::vector<double> vertices) {
    require(n >= 1 && n <= 3, "simplex indicator: n must be 1..3");
    require(static_cast<int>(vertices.size()) == n * (n + 1), "simplex indicator: vertex count");
    geometry::SimplexParams s{n, vertices};
    geometry::simplex_volume(s);  // rejects degenerate vertices
    return FunctionRep{SimplexIndicator{n, std::move(vertices)}};
}

FunctionRep make_sampled_grid(std::vector<double> values) {
    require(values.size() >= 2, "sampled grid: need >= 2 samples");
    return FunctionRep{SampledGrid{std::move(values)}};
}

PiecewiseLinear to_piecewise_linear(const FunctionRep& f) {
    if (const auto* pwl = std::get_if<PiecewiseLinear>(&f.node)) return *pwl;
    if (const auto* ind = std::get_if<IntervalIndicator>(&f.node)) {
        PiecewiseLinear out;
        out.breaks.push_back(0.0);
        if (ind->a > 0.0) {
            out.breaks.push_back(ind->a);
            out.slope.push_back(0.0);
            out.offset.push_back(0.0);
        }
        if (ind->b < 1.0) {
            out.breaks.push_back(ind->b);
            out.slope.push_back(0.0);
            out.offset.push_back(ind->intensity);
            out.breaks.push_back(1.0);
            out.slope.push_back(0.0);
            out.offset.push_back(0.0);
        } else {
            out.breaks.push_back(1.0);
            out.slope.push_back(0.0);
            out.offset.push_back(ind->intensity);
        }
        return out;
    }
    if (const auto* grid = std::get_if<SampledGrid>(&f.node)) {
        PiecewiseLinear out;
        size_t m = grid->values.size();
        double h = 1.0 / static_cast<double>(m - 1);
        for (size_t i = 0; i + 1 < m; ++i) {
            double t0 = static_cast<double>(i) * h;
            double s = (grid->values[i + 1] - grid->values[i]) / h;
            out.breaks.push_back(i == 0 ? 0.0 : t0);
            out.slope.push_back(s);
            out.offset.push_back(grid->values[i] - s * t0);
        }
        out.breaks.push_back(1.0);
        return out;
    }
    throw invalid_input("to_piecewise_linear: kind is not defined on [0,1]");
}

PiecewiseLinear pwl_subtract(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    std::vector<double> breaks;
    breaks.reserve(f.breaks.size() + g.breaks.size());
    std::merge(f.breaks.begin(), f.breaks.end(), g.breaks.begin(), g.breaks.end(),
               std::back_inserter(breaks));
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    PiecewiseLinear out;
    out.breaks = breaks;
    size_t fi = 0, gi = 0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        while (fi + 2 < f.breaks.size() && f.breaks[fi + 1] <= mid) ++fi;
        while (gi + 2 < g.breaks.size() && g.breaks[gi + 1] <= mid) ++gi;
        out.slope.push_back(f.slope[fi] - g.slope[gi]);
        out.offset.push_back(f.offset[fi] - g.offset[gi]);
    }
    return out;
}

// Signed antiderivative of |v|^p: S(v) = sign(v) |v|^{p+1} / (p+1).
static double abs_pow_anti(double v, double p) {
    double a = std::pow(std::fabs(v), p + 1.0) / (p + 1.0);
    return v >= 0.0 ? a : -a;
}

double pwl_lp_norm(const PiecewiseLinear& f, double p) {
    if (p == kInf) {
        double m = 0.0;
        for (size_t i = 0; i + 1 < f.breaks.size(); ++i) {
            m = std::max(m, std::fabs(f.slope[i] * f.breaks[i] + f.offset[i]));
            m = std::max(m, std::fabs(f.slope[i] * f.breaks[i + 1] + f.offset[i]));
        }
        return m;
    }
    double total = 0.0;
    for (size_t i = 0; i + 1 < f.breaks.size(); ++i) {
        double u = f.breaks[i], w = f.breaks[i + 1];
        double s = f.slope[i], o = f.offset[i];
        if (s == 0.0) {
            total += std::pow(std::fabs(o), p) * (w - u);
        } else {
            total += (abs_pow_anti(s * w + o, p) - abs_pow_anti(s * u + o, p)) / s;
        }
    }
    return std::pow(std::max(0.0, total), 1.0 / p);
}

std::vector<double> breakpoints(const FunctionRep& f) {
    if (const auto* ind = std::get_if<IntervalIndicator>(&f.node))
        return {0.0, ind->a, ind->b, 1.0};
    if (const auto* pwl = std::get_if<PiecewiseLinear>(&f.node)) return pwl->breaks;
    if (std::get_if<SampledGrid>(&f.node)) return to_piecewise_linear(f).breaks;
    return {0.0, 1.0};
}

double evaluate1(const FunctionRep& f, double t) { return evaluate(f, {t}); }

double evaluate(const FunctionRep& f, const std::vector<double>& point) {
    Domain d = f.domain();
    require(static_cast<int>(point.size()) == d.dim, "evaluate: point dimension mismatch");
    if (d.kind == DomainKind::UnitInterval)
        require(point[0] >= 0.0 && point[0] <= 1.0, "evaluate: t outside [0,1]");
    return std::visit(
        [&](const auto& fn) -> double {
            using T = std::decay_t<decltype(fn)>;
            if constexpr (std::is_same_v<T, IntervalIndicator>) {
                double t = point[0];
                return (t >= fn.a && t < fn.b) ? fn.intensity : 0.0;
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                double t = point[0];
                auto it = std::upper_bound(fn.breaks.begin(), fn.breaks.end(), t);
                size_t i = static_cast<size_t>(std::distance(fn.breaks.begin(), it));
                if (i == 0) i = 1;
                if (i >= fn.breaks.size()) i = fn.breaks.size() - 1;
                return fn.slope[i - 1] * t + fn.offset[i - 1];
            } else if constexpr (std::is_same_v<T, BallIndicator>) {
                return sq_dist(point, fn.centre) <= fn.radius * fn.radius ? fn.intensity : 0.0;
            } else if constexpr (std::is_same_v<T, GaussianBump>) {
                return std::exp(-sq_dist(point, fn.centre));
            } else if constexpr (std::is_same_v<T, GaussianDirectional>) {
                double ip = 0.0;
                for (size_t i = 0; i < fn.centre.size(); ++i)
                    ip += (point[i] - fn.centre[i]) * fn.direction[i];
                return 2.0 * std::exp(-sq_dist(point, fn.centre)) * ip;
            } else if constexpr (std::is_same_v<T, SimplexIndicator>) {
                geometry::SimplexParams s{fn.n, fn.vertices};
                // Re-derive the barycentric test per call; evaluation of
                // simplex indicators is not on any hot path.
                auto v0 = s.vertex(0);
                Matrix e(fn.n, fn.n);
                for (int j = 0; j < fn.n; ++j)
                    for (int i = 0; i < fn.n; ++i)
                        e(i, j) = fn.vertices[static_cast<size_t>((j + 1) * fn.n + i)] -
                                  fn.vertices[static_cast<size_t>(i)];
                // Solve e * lambda = point - v0 by Cramer (n <= 3).
                std::vector<double> rhs(static_cast<size_t>(fn.n));
                for (int i = 0; i < fn.n; ++i) rhs[static_cast<size_t>(i)] = point[static_cast<size_t>(i)] - v0[static_cast<size_t>(i)];
                auto det_n = [&](const Matrix& m) {
                    if (m.rows == 1) return m(0, 0);
                    if (m.rows == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
                    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
                };
                double det = det_n(e);
                double sum = 0.0;
                for (int j = 0; j < fn.n; ++j) {
                    Matrix ej = e;
                    for (int i = 0; i < fn.n; ++i) ej(i, j) = rhs[static_cast<size_t>(i)];
                    double lj = det_n(ej) / det;
                    if (lj < 0.0) return 0.0;
                    sum += lj;
                }
                return sum <= 1.0 ? 1.0 : 0.0;
            } else {  // SampledGrid
                double t = point[0];
                size_t m = fn.values.size();
                double h = 1.0 / static_cast<double>(m - 1);
                size_t i = std::min(m - 2, static_cast<size_t>(t / h));
                double t0 = static_cast<double>(i) * h;
                double w = (t - t0) / h;
                return fn.values[i] * (1.0 - w) + fn.values[i + 1] * w;
            }
        },
        f.node);
}

// || 2 e^{-|u|^2} <u, h> ||_p = |h| * (2^p p^{-(p+1)/2} Gamma((p+1)/2) (pi/p)^{(n-1)/2})^{1/p}
static double gaussian_directional_norm(int n, double hnorm, double p) {
    if (p == kInf) return hnorm * std::sqrt(2.0) * std::exp(-0.5);
    double ln = p * std::log(2.0) - 0.5 * (p + 1.0) * std::log(p) + std::lgamma(0.5 * (p + 1.0)) +
                0.5 * (n - 1) * std::log(kPi / p);
    return hnorm * std::exp(ln / p);
}

double lp_norm(const FunctionRep& f, double p) {
    require(p >= 1.0, "lp_norm: p >= 1");
    return std::visit(
        [&](const auto& fn) -> double {
            using T = std::decay_t<decltype(fn)>;
            if constexpr (std::is_same_v<T, IntervalIndicator>) {
                if (p == kInf) return fn.intensity;
                return fn.intensity * std::pow(fn.b - fn.a, 1.0 / p);
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                return pwl_lp_norm(fn, p);
            } else if constexpr (std::is_same_v<T, BallIndicator>) {
                if (p == kInf) return fn.intensity;
                int n = static_cast<int>(fn.centre.size());
                return fn.intensity * std::pow(geometry::ball_volume(n, fn.radius), 1.0 / p);
            } else if constexpr (std::is_same_v<T, GaussianBump>) {
                if (p == kInf) return 1.0;
                int n = static_cast<int>(fn.centre.size());
                return std::pow(kPi / p, 0.5 * n / p);
            } else if constexpr (std::is_same_v<T, GaussianDirectional>) {
                int n = static_cast<int>(fn.centre.size());
                return gaussian_directional_norm(n, vec_norm(fn.direction), p);
            } else if constexpr (std::is_same_v<T, SimplexIndicator>) {
                if (p == kInf) return 1.0;
                geometry::SimplexParams s{fn.n, fn.vertices};
                return std::pow(geometry::simplex_volume(s), 1.0 / p);
            } else {
                return pwl_lp_norm(to_piecewise_linear(f), p);
            }
        },
        f.node);
}

namespace {

// ( int_R |e^{-(u-d)^2} - e^{-u^2}|^p du )^{1/p}-style helper reduced to the
// axis through the two centres; the orthogonal directions factor out.
double gaussian_pair_distance(int n, double d, double p) {
    if (d == 0.0) return 0.0;
    auto f = [&](double u) {
        return std::pow(std::fabs(std::exp(-(u - d) * (u - d)) - std::exp(-u * u)), p);
    };
    double axis = integrate_split(f, {-8.0, 0.5 * d, d + 8.0}, 24, 16);
    double cross = std::pow(kPi / p, 0.5 * (n - 1));
    return std::pow(axis * cross, 1.0 / p);
}

double euclidean_quadrature_distance(const FunctionRep& f, const FunctionRep& g, double p) {
    Domain d = f.domain();
    require(d.dim <= 3, "lp_distance: quadrature fallback limited to dim <= 3");
    // Gaussian-type integrands: box around both centres.
    std::vector<double> lo(static_cast<size_t>(d.dim), 1e300), hi(static_cast<size_t>(d.dim), -1e300);
    auto widen = [&](const std::vector<double>& c, double pad) {
        for (int i = 0; i < d.dim; ++i) {
            lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], c[static_cast<size_t>(i)] - pad);
            hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], c[static_cast<size_t>(i)] + pad);
        }
    };
    for (const FunctionRep* h : {&f, &g}) {
        std::visit(
            [&](const auto& fn) {
                using T = std::decay_t<decltype(fn)>;
                if constexpr (std::is_same_v<T, BallIndicator>) {
                    widen(fn.centre, fn.radius);
                } else if constexpr (std::is_same_v<T, GaussianBump> ||
                                     std::is_same_v<T, GaussianDirectional>) {
                    widen(fn.centre, 7.5);
                } else if constexpr (std::is_same_v<T, SimplexIndicator>) {
                    for (int j = 0; j <= fn.n; ++j) {
                        std::vector<double> v(static_cast<size_t>(fn.n));
                        for (int i = 0; i < fn.n; ++i) v[static_cast<size_t>(i)] = fn.vertices[static_cast<size_t>(j * fn.n + i)];
                        widen(v, 0.0);
                    }
                } else {
                    throw invalid_input("lp_distance: unsupported kind for quadrature fallback");
                }
            },
            h->node);
    }
    auto integrand = [&](const std::vector<double>& x) {
        return std::pow(std::fabs(evaluate(f, x) - evaluate(g, x)), p);
    };
    int panels = d.dim == 1 ? 24 : (d.dim == 2 ? 10 : 6);
    return std::pow(integrate_box(integrand, lo, hi, panels, 12), 1.0 / p);
}

double ball_pair_distance(const BallIndicator& f, const BallIndicator& g, double p) {
    int n = static_cast<int>(f.centre.size());
    geometry::BallParams p1{f.centre, f.radius}, p2{g.centre, g.radius};
    double d = std::sqrt(sq_dist(f.centre, g.centre));
    double inter = 0.0;
    if (d < f.radius + g.radius) inter = geometry::ball_intersection_volume(n, f.radius, g.radius, d);
    double only1 = geometry::ball_volume(n, f.radius) - inter;
    double only2 = geometry::ball_volume(n, g.radius) - inter;
    double dl = std::fabs(f.intensity - g.intensity);
    if (p == kInf) {
        double m = dl > 0.0 && inter > 0.0 ? dl : 0.0;
        if (only1 > 1e-15) m = std::max(m, f.intensity);
        if (only2 > 1e-15) m = std::max(m, g.intensity);
        return m;
    }
    double total = std::pow(f.intensity, p) * std::max(0.0, only1) +
                   std::pow(g.intensity, p) * std::max(0.0, only2) +
                   std::pow(dl, p) * inter;
    return std::pow(total, 1.0 / p);
}

}  // namespace

double lp_distance(const FunctionRep& f, const FunctionRep& g, double p) {
    require(p >= 1.0, "lp_distance: p >= 1");
    Domain df = f.domain(), dg = g.domain();
    require(df == dg, "lp_distance: incompatible domains");

    if (df.kind == DomainKind::UnitInterval) {
        PiecewiseLinear diff = pwl_subtract(to_piecewise_linear(f), to_piecewise_linear(g));
        return pwl_lp_norm(diff, p);
    }

    const auto* bf = std::get_if<BallIndicator>(&f.node);
    const auto* bg = std::get_if<BallIndicator>(&g.node);
    if (bf && bg) return ball_pair_distance(*bf, *bg, p);

    const auto* gf = std::get_if<GaussianBump>(&f.node);
    const auto* gg = std::get_if<GaussianBump>(&g.node);
    if (gf && gg)
        return gaussian_pair_distance(df.dim, std::sqrt(sq_dist(gf->centre, gg->centre)), p);

    const auto* df1 = std::get_if<GaussianDirectional>(&f.node);
    const auto* dg1 = std::get_if<GaussianDirectional>(&g.node);
    if (df1 && dg1 && df1->centre == dg1->centre) {
        std::vector<double> hd(df1->direction.size());
        for (size_t i = 0; i < hd.size(); ++i) hd[i] = df1->direction[i] - dg1->direction[i];
        return gaussian_directional_norm(df.dim, vec_norm(hd), p);
    }

    const auto* sf = std::get_if<SimplexIndicator>(&f.node);
    const auto* sg = std::get_if<SimplexIndicator>(&g.node);
    if (sf && sg) {
        require(p != kInf, "lp_distance: p = infinity unsupported for simplex pairs");
        geometry::SimplexParams s1{sf->n, sf->vertices}, s2{sg->n, sg->vertices};
        return std::pow(geometry::simplex_symmdiff(s1, s2), 1.0 / p);
    }

    require(p != kInf, "lp_distance: p = infinity unsupported for this pair");
    return euclidean_quadrature_distance(f, g, p);
}

std::vector<std::complex<double>> fourier_coefficients(const FunctionRep& f, int K) {
    require(K >= 0, "fourier_coefficients: K >= 0");
    require(f.domain().kind == DomainKind::UnitInterval,
            "fourier_coefficients: function must live on [0,1]");
    std::vector<std::complex<double>> c(static_cast<size_t>(2 * K + 1));

    PiecewiseLinear pwl = to_piecewise_linear(f);
    const size_t nb = pwl.breaks.size();
    {
        std::complex<double> acc(0.0, 0.0);
        for (size_t i = 0; i + 1 < nb; ++i) {
            double u = pwl.breaks[i], w = pwl.breaks[i + 1];
            acc += 0.5 * pwl.slope[i] * (w * w - u * u) + pwl.offset[i] * (w - u);
        }
        c[static_cast<size_t>(K)] = acc;
    }
    // Phases e^{-2 pi i k u_j} advance by one factor per k.
    std::vector<std::complex<double>> base(nb), ek(nb, std::complex<double>(1.0, 0.0));
    for (size_t j = 0; j < nb; ++j)
        base[j] = std::exp(std::complex<double>(0.0, -2.0 * kPi * pwl.breaks[j]));
    for (int k = 1; k <= K; ++k) {
        for (size_t j = 0; j < nb; ++j) ek[j] *= base[j];
        const std::complex<double> mu(0.0, -2.0 * kPi * k);
        const std::complex<double> mu2 = mu * mu;
        std::complex<double> acc(0.0, 0.0);
        for (size_t i = 0; i + 1 < nb; ++i) {
            double u = pwl.breaks[i], w = pwl.breaks[i + 1];
            double s = pwl.slope[i], o = pwl.offset[i];
            acc += ek[i + 1] * ((s * w + o) / mu - s / mu2) - ek[i] * ((s * u + o) / mu - s / mu2);
        }
        c[static_cast<size_t>(K + k)] = acc;
        c[static_cast<size_t>(K - k)] = std::conj(acc);
    }
    return c;
}

}  // namespace invlab::funcspace
