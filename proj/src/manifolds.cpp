#include "invlab/manifolds.hpp"

#include <algorithm>
#include <cmath>

#include "invlab/rng.hpp"

namespace invlab::manifolds {

using funcspace::FunctionRep;

const char* family_name(FamilyTag t) {
    switch (t) {
        case FamilyTag::Interval: return "interval";
        case FamilyTag::Ball: return "ball";
        case FamilyTag::BallIntensity: return "ball-intensity";
        case FamilyTag::Gaussian: return "gaussian";
        default: return "simplex";
    }
}

FamilyTag family_from_name(const std::string& name) {
    if (name == "interval") return FamilyTag::Interval;
    if (name == "ball") return FamilyTag::Ball;
    if (name == "ball-intensity") return FamilyTag::BallIntensity;
    if (name == "gaussian") return FamilyTag::Gaussian;
    if (name == "simplex") return FamilyTag::Simplex;
    throw invalid_input("unknown family: " + name);
}

bool ParamBox::contains(const std::vector<double>& x, double tol) const {
    if (x.size() != lo.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
}

std::vector<double> ParamBox::centre() const {
    std::vector<double> c(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

double ParamBox::euclid_diameter() const {
    double s = 0.0;
    for (size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    return std::sqrt(s);
}

static double euclid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

static double vnorm(const std::vector<double>& x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

// max_j |v_j - w_j|_2 over vertex columns.
static double simplex_matrix_norm(int n, const std::vector<double>& v, const std::vector<double>& w) {
    double m = 0.0;
    for (int j = 0; j * n < static_cast<int>(v.size()); ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = v[static_cast<size_t>(j * n + i)] - w[static_cast<size_t>(j * n + i)];
            s += d * d;
        }
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

bool Family::in_chart(const std::vector<double>& c) const {
    if (static_cast<int>(c.size()) != chart_dim()) return false;
    switch (tag) {
        case FamilyTag::Interval: {
            double a = c[0], b = c[1];
            return 0.0 < a && a < b && b < 1.0 && b - a > eps;
        }
        case FamilyTag::Ball: {
            std::vector<double> centre(c.begin(), c.begin() + ambient_dim);
            double r = c[static_cast<size_t>(ambient_dim)];
            return vnorm(centre) < A && rho < r && r < R;
        }
        case FamilyTag::BallIntensity: {
            std::vector<double> centre(c.begin(), c.begin() + ambient_dim);
            double r = c[static_cast<size_t>(ambient_dim)];
            double lam = c[static_cast<size_t>(ambient_dim + 1)];
            return vnorm(centre) < A && rho < r && r < R && rho < lam && lam < R;
        }
        case FamilyTag::Gaussian:
            return true;
        case FamilyTag::Simplex: {
            if (simplex_matrix_norm(ambient_dim, c, base_simplex.vertices) >= chart_radius)
                return false;
            geometry::SimplexParams s{ambient_dim, c};
            for (int i = 0; i <= ambient_dim; ++i)
                for (int j = i + 1; j <= ambient_dim; ++j)
                    if (euclid(s.vertex(i), s.vertex(j)) >= mu) return false;
            Matrix e(ambient_dim, ambient_dim);
            for (int j = 0; j < ambient_dim; ++j)
                for (int i = 0; i < ambient_dim; ++i)
                    e(i, j) = c[static_cast<size_t>((j + 1) * ambient_dim + i)] -
                              c[static_cast<size_t>(i)];
            double det;
            if (ambient_dim == 2)
                det = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
            else if (ambient_dim == 1)
                det = e(0, 0);
            else
                det = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
                      e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
                      e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
            return det != 0.0;
        }
    }
    return false;
}

bool Family::in_K(const std::vector<double>& c) const {
    if (!K.box.contains(c, 1e-12)) return false;
    if (tag == FamilyTag::Interval && c[1] - c[0] < 2.0 * eps - 1e-12) return false;
    return in_chart(c);
}

ModelPoint Family::make_point(std::vector<double> coords) const {
    require(static_cast<int>(coords.size()) == chart_dim(), "make_point: coordinate count");
    require(in_chart(coords), "make_point: coordinates outside the chart image");
    return ModelPoint{tag, ambient_dim, std::move(coords)};
}

FunctionRep Family::embed(const ModelPoint& x) const {
    require(x.tag == tag, "embed: family mismatch");
    require(in_chart(x.coords), "embed: coordinates outside the chart image");
    switch (tag) {
        case FamilyTag::Interval:
            return funcspace::make_interval_indicator(x.coords[0], x.coords[1]);
        case FamilyTag::Ball: {
            std::vector<double> centre(x.coords.begin(), x.coords.begin() + ambient_dim);
            return funcspace::make_ball_indicator(centre, x.coords[static_cast<size_t>(ambient_dim)]);
        }
        case FamilyTag::BallIntensity: {
            std::vector<double> centre(x.coords.begin(), x.coords.begin() + ambient_dim);
            return funcspace::make_ball_indicator(centre, x.coords[static_cast<size_t>(ambient_dim)],
                                                  x.coords[static_cast<size_t>(ambient_dim + 1)]);
        }
        case FamilyTag::Gaussian:
            return funcspace::make_gaussian(x.coords);
        default:
            return funcspace::make_simplex_indicator(ambient_dim, x.coords);
    }
}

ModelPoint Family::chart_coords(const FunctionRep& f) const {
    switch (tag) {
        case FamilyTag::Interval: {
            const auto* ind = std::get_if<funcspace::IntervalIndicator>(&f.node);
            require(ind != nullptr && ind->intensity == 1.0, "chart_coords: not an interval indicator");
            return make_point({ind->a, ind->b});
        }
        case FamilyTag::Ball: {
            const auto* b = std::get_if<funcspace::BallIndicator>(&f.node);
            require(b != nullptr && b->intensity == 1.0 &&
                        static_cast<int>(b->centre.size()) == ambient_dim,
                    "chart_coords: not a unit ball indicator of the right dimension");
            std::vector<double> c = b->centre;
            c.push_back(b->radius);
            return make_point(std::move(c));
        }
        case FamilyTag::BallIntensity: {
            const auto* b = std::get_if<funcspace::BallIndicator>(&f.node);
            require(b != nullptr && static_cast<int>(b->centre.size()) == ambient_dim,
                    "chart_coords: not a ball indicator of the right dimension");
            std::vector<double> c = b->centre;
            c.push_back(b->radius);
            c.push_back(b->intensity);
            return make_point(std::move(c));
        }
        case FamilyTag::Gaussian: {
            const auto* g = std::get_if<funcspace::GaussianBump>(&f.node);
            require(g != nullptr && static_cast<int>(g->centre.size()) == ambient_dim,
                    "chart_coords: not a gaussian of the right dimension");
            return make_point(g->centre);
        }
        default: {
            const auto* s = std::get_if<funcspace::SimplexIndicator>(&f.node);
            require(s != nullptr && s->n == ambient_dim,
                    "chart_coords: not a simplex indicator of the right dimension");
            // Canonical column layout pairs each vertex with the unique base
            // vertex within the chart radius; the input order is first made
            // deterministic by lexicographic sorting.
            geometry::SimplexParams sorted =
                geometry::sort_vertices(geometry::SimplexParams{s->n, s->vertices});
            const int n = ambient_dim;
            const int cols = n + 1;
            std::vector<double> matched(static_cast<size_t>(n * cols));
            std::vector<bool> used(static_cast<size_t>(cols), false);
            for (int j = 0; j < cols; ++j) {
                auto target = base_simplex.vertex(j);
                int best = -1;
                double best_d = chart_radius;
                for (int i = 0; i < cols; ++i) {
                    if (used[static_cast<size_t>(i)]) continue;
                    double d = euclid(sorted.vertex(i), target);
                    if (d < best_d) {
                        best_d = d;
                        best = i;
                    }
                }
                require(best >= 0, "chart_coords: simplex vertices do not match the chart base");
                used[static_cast<size_t>(best)] = true;
                for (int i = 0; i < n; ++i)
                    matched[static_cast<size_t>(j * n + i)] =
                        sorted.vertices[static_cast<size_t>(best * n + i)];
            }
            return make_point(std::move(matched));
        }
    }
}

double Family::ambient_distance(const ModelPoint& x, const ModelPoint& y) const {
    return ambient_distance(x, y, p);
}

double Family::ambient_distance(const ModelPoint& x, const ModelPoint& y, double p_override) const {
    require(x.tag == tag && y.tag == tag, "ambient_distance: family mismatch");
    return funcspace::lp_distance(embed(x), embed(y), p_override);
}

std::vector<ModelPoint> Family::sample_compact(long count, std::uint64_t seed) const {
    require(count >= 1, "sample_compact: count >= 1");
    require(K.box.dim() >= 1, "sample_compact: empty box");
    std::vector<ModelPoint> out;
    out.reserve(static_cast<size_t>(count));
    int m = chart_dim();
    std::uint64_t offset = 1 + (splitmix64(seed) % (1ULL << 30));
    std::uint64_t idx = 0;
    long guard = count * 10000 + 100000;
    while (static_cast<long>(out.size()) < count && guard-- > 0) {
        std::vector<double> c;
        if (idx == 0) {
            c = K.box.centre();
        } else {
            auto u = halton_point(offset + idx, m);
            c.resize(static_cast<size_t>(m));
            for (int d = 0; d < m; ++d)
                c[static_cast<size_t>(d)] =
                    K.box.lo[static_cast<size_t>(d)] +
                    u[static_cast<size_t>(d)] *
                        (K.box.hi[static_cast<size_t>(d)] - K.box.lo[static_cast<size_t>(d)]);
        }
        ++idx;
        if (!in_K(c)) continue;
        out.push_back(ModelPoint{tag, ambient_dim, std::move(c)});
    }
    require(static_cast<long>(out.size()) == count, "sample_compact: constraint rejects the box");
    return out;
}

std::vector<double> Family::clamp_to_K(std::vector<double> c, bool* clamped) const {
    bool touched = false;
    for (size_t i = 0; i < c.size(); ++i) {
        double v = std::min(std::max(c[i], K.box.lo[i]), K.box.hi[i]);
        if (v != c[i]) touched = true;
        c[i] = v;
    }
    if (tag == FamilyTag::Interval && c[1] - c[0] < 2.0 * eps) {
        double mid = 0.5 * (c[0] + c[1]);
        double a = mid - eps, b = mid + eps;
        a = std::max(a, K.box.lo[0]);
        b = std::max(b, a + 2.0 * eps);
        b = std::min(b, K.box.hi[1]);
        a = std::min(a, b - 2.0 * eps);
        c[0] = a;
        c[1] = b;
        touched = true;
    }
    if (clamped != nullptr) *clamped = touched;
    return c;
}

funcspace::FunctionRep gaussian_chart_derivative(const std::vector<double>& centre,
                                                 const std::vector<double>& direction) {
    require(!direction.empty(), "gaussian_chart_derivative: zero-dimensional direction");
    return funcspace::make_gaussian_directional(centre, direction);
}

// -------- family construction --------

namespace {

struct RatioStats {
    double inf_chart_over_amb = 1e300;  // inf |Δchart|_2^alpha / ambient
    double inf_amb_over_chart = 1e300;  // inf ambient / |Δchart|_2
    double sup_amb_over_chart_alpha = 0.0;  // sup ambient / |Δchart|_2^alpha
};

RatioStats pair_ratios(const Family& fam, double alpha) {
    RatioStats st;
    auto pts = fam.sample_compact(40, 0xE57ull);
    // Near pairs probe the differential regime the constants come from.
    CounterRng rng(0xE57ull);
    std::uint64_t ctr = 0;
    std::vector<ModelPoint> near;
    for (int i = 0; i < 240; ++i) {
        const ModelPoint& base = pts[static_cast<size_t>(i % pts.size())];
        double scale = std::pow(10.0, rng.uniform(ctr++, -4.0, -1.0));
        std::vector<double> c = base.coords;
        double nrm = 0.0;
        std::vector<double> dir(c.size());
        for (size_t d = 0; d < c.size(); ++d) {
            dir[d] = rng.uniform(ctr++, -1.0, 1.0);
            nrm += dir[d] * dir[d];
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) continue;
        for (size_t d = 0; d < c.size(); ++d) c[d] += scale * dir[d] / nrm;
        if (!fam.in_K(c)) continue;
        near.push_back(ModelPoint{fam.tag, fam.ambient_dim, std::move(c)});
        near.push_back(base);
    }
    auto feed = [&](const ModelPoint& x, const ModelPoint& y) {
        double dc = euclid(x.coords, y.coords);
        if (dc == 0.0) return;
        double da = fam.ambient_distance(x, y);
        if (da <= 0.0) return;
        st.inf_chart_over_amb = std::min(st.inf_chart_over_amb, std::pow(dc, alpha) / da);
        st.inf_amb_over_chart = std::min(st.inf_amb_over_chart, da / dc);
        st.sup_amb_over_chart_alpha = std::max(st.sup_amb_over_chart_alpha, da / std::pow(dc, alpha));
    };
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) feed(pts[i], pts[j]);
    for (size_t i = 0; i + 1 < near.size(); i += 2) feed(near[i], near[i + 1]);
    return st;
}

// ell must serve both sides of the chart comparison: |Δchart|^alpha >=
// ell * ambient and |Δchart| <= ambient / ell. Estimated contributions are
// halved as a safety margin.
void finish_constants(Family& fam, bool ell_analytic, double ell_analytic_value,
                      bool upper_analytic, double upper_analytic_value) {
    RatioStats st = pair_ratios(fam, fam.holder.alpha);
    if (ell_analytic) {
        fam.holder.ell = ell_analytic_value;
        fam.holder.ell_estimated = false;
    } else {
        double est = std::min(st.inf_chart_over_amb, st.inf_amb_over_chart);
        fam.holder.ell = std::min(1.0, 0.5 * est);
        fam.holder.ell_estimated = true;
    }
    if (upper_analytic) {
        fam.chart_to_ambient = upper_analytic_value;
        fam.chart_to_ambient_estimated = false;
    } else {
        fam.chart_to_ambient = 1.5 * st.sup_amb_over_chart_alpha;
        fam.chart_to_ambient_estimated = true;
    }
}

}  // namespace

Family make_interval_family(double eps, double p) {
    require(eps > 0.0 && eps < 0.5, "interval family: eps in (0, 1/2)");
    require(p >= 1.0, "interval family: p >= 1");
    Family fam;
    fam.tag = FamilyTag::Interval;
    fam.ambient_dim = 1;
    fam.p = p;
    fam.eps = eps;
    fam.K.box = ParamBox{{eps, eps}, {1.0 - eps, 1.0 - eps}};
    // Nearest chart-boundary point differs by eps in the symmetric-difference
    // measure, in every direction that leaves K.
    fam.K.chart_margin = eps;
    fam.K.delta_km = 0.5 * eps;
    fam.holder.alpha = 1.0 / p;
    // Two-sided estimate eps * (|Δa|+|Δb|) <= |symmdiff| <= |Δa|+|Δb| gives
    // ell = eps in the sum norm and ambient <= sqrt(2) |Δchart|_2 for p = 1.
    if (p == 1.0) {
        fam.holder.ell = eps;
        fam.holder.ell_estimated = false;
        fam.chart_to_ambient = std::sqrt(2.0);
        fam.chart_to_ambient_estimated = false;
    } else {
        finish_constants(fam, false, 0.0, false, 0.0);
    }
    return fam;
}

Family make_ball_family(int n, double A, double rho, double R, double p) {
    require(n >= 1 && n <= 3, "ball family: n must be 1..3");
    require(A > 0.0 && 0.0 < rho && rho < R, "ball family: need A > 0, 0 < rho < R");
    require(p >= 1.0, "ball family: p >= 1");
    Family fam;
    fam.tag = FamilyTag::Ball;
    fam.ambient_dim = n;
    fam.p = p;
    fam.A = A;
    fam.rho = rho;
    fam.R = R;
    double cbox = 0.9 * A / std::sqrt(static_cast<double>(n));
    double rmargin = 0.1 * (R - rho);
    ParamBox box;
    for (int i = 0; i < n; ++i) {
        box.lo.push_back(-cbox);
        box.hi.push_back(cbox);
    }
    box.lo.push_back(rho + rmargin);
    box.hi.push_back(R - rmargin);
    fam.K.box = box;
    fam.K.chart_margin = std::min(0.1 * A, rmargin);
    fam.holder.alpha = 1.0 / p;
    finish_constants(fam, false, 0.0, false, 0.0);
    fam.K.delta_km = 0.5 * fam.holder.ell * fam.K.chart_margin;
    return fam;
}

Family make_ball_intensity_family(int n, double A, double rho, double R) {
    require(n >= 1 && n <= 3, "ball-intensity family: n must be 1..3");
    require(A > 0.0 && 0.0 < rho && rho < R, "ball-intensity family: need A > 0, 0 < rho < R");
    Family fam;
    fam.tag = FamilyTag::BallIntensity;
    fam.ambient_dim = n;
    fam.p = 1.0;
    fam.A = A;
    fam.rho = rho;
    fam.R = R;
    double cbox = 0.9 * A / std::sqrt(static_cast<double>(n));
    double rmargin = 0.1 * (R - rho);
    ParamBox box;
    for (int i = 0; i < n; ++i) {
        box.lo.push_back(-cbox);
        box.hi.push_back(cbox);
    }
    box.lo.push_back(rho + rmargin);
    box.hi.push_back(R - rmargin);
    box.lo.push_back(rho + rmargin);
    box.hi.push_back(R - rmargin);
    fam.K.box = box;
    fam.K.chart_margin = std::min(0.1 * A, rmargin);
    fam.holder.alpha = 1.0;
    finish_constants(fam, false, 0.0, false, 0.0);
    fam.K.delta_km = 0.5 * fam.holder.ell * fam.K.chart_margin;
    return fam;
}

Family make_gaussian_family(int n, double A, double p) {
    require(n >= 1 && n <= 3, "gaussian family: n must be 1..3");
    require(A > 0.0, "gaussian family: A > 0");
    require(p >= 1.0, "gaussian family: p >= 1");
    Family fam;
    fam.tag = FamilyTag::Gaussian;
    fam.ambient_dim = n;
    fam.p = p;
    fam.A = A;
    ParamBox box;
    for (int i = 0; i < n; ++i) {
        box.lo.push_back(-A);
        box.hi.push_back(A);
    }
    fam.K.box = box;
    fam.K.chart_margin = 1.0;  // single chart covering R^n
    fam.holder.alpha = 1.0;
    // Mean value bound: ambient <= |(phi^-1)'| * |Δa| with the operator norm
    // of the directional-derivative map, which is translation invariant.
    double op_norm = funcspace::lp_norm(gaussian_chart_derivative(std::vector<double>(n, 0.0),
                                                                  [&] {
                                                                      std::vector<double> e(n, 0.0);
                                                                      e[0] = 1.0;
                                                                      return e;
                                                                  }()),
                                        p);
    finish_constants(fam, false, 0.0, true, op_norm);
    fam.K.delta_km = 1.0;
    return fam;
}

Family make_simplex_family(const geometry::SimplexParams& base, double mu, double k_halfwidth) {
    require(base.n >= 1 && base.n <= 3, "simplex family: n must be 1..3");
    require(k_halfwidth > 0.0, "simplex family: k_halfwidth > 0");
    Family fam;
    fam.tag = FamilyTag::Simplex;
    fam.ambient_dim = base.n;
    fam.p = 1.0;
    fam.mu = mu;
    fam.base_simplex = geometry::sort_vertices(base);
    double min_edge = 1e300, max_edge = 0.0;
    for (int i = 0; i <= base.n; ++i)
        for (int j = i + 1; j <= base.n; ++j) {
            double d = euclid(fam.base_simplex.vertex(i), fam.base_simplex.vertex(j));
            min_edge = std::min(min_edge, d);
            max_edge = std::max(max_edge, d);
        }
    require(max_edge < mu, "simplex family: base simplex violates the mu bound");
    fam.chart_radius = min_edge / 3.0;
    double hw_norm = k_halfwidth * std::sqrt(static_cast<double>(base.n));
    require(hw_norm < fam.chart_radius, "simplex family: K halfwidth exceeds the chart radius");
    ParamBox box;
    for (double v : fam.base_simplex.vertices) {
        box.lo.push_back(v - k_halfwidth);
        box.hi.push_back(v + k_halfwidth);
    }
    fam.K.box = box;
    fam.K.chart_margin = fam.chart_radius - hw_norm;
    fam.holder.alpha = 1.0;
    // |T △ T'| <= 3^n (n+1) mu^{n-1} * max-vertex displacement.
    double lip = std::pow(3.0, base.n) * (base.n + 1) * std::pow(mu, base.n - 1);
    finish_constants(fam, false, 0.0, true, lip);
    fam.K.delta_km = 0.5 * fam.holder.ell * fam.K.chart_margin;
    return fam;
}

}  // namespace invlab::manifolds
