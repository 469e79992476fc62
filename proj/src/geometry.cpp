#include "invlab/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "invlab/rng.hpp"
#include "invlab/special.hpp"

namespace invlab::geometry {

std::vector<double> SimplexParams::vertex(int j) const {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = vertices[static_cast<size_t>(j * n + i)];
    return v;
}

double ball_volume(int n, double r) {
    require(r >= 0.0, "ball_volume: r >= 0");
    return unit_ball_volume(n) * std::pow(r, n);
}

static double centre_distance(const BallParams& b1, const BallParams& b2) {
    require(b1.centre.size() == b2.centre.size(), "ball pair: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < b1.centre.size(); ++i) {
        double d = b1.centre[i] - b2.centre[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double ball_intersection_volume(int n, double r1, double r2, double d) {
    require(r1 > 0.0 && r2 > 0.0, "ball_intersection_volume: radii > 0");
    require(d >= 0.0, "ball_intersection_volume: d >= 0");
    if (d >= r1 + r2) return 0.0;
    if (d <= std::fabs(r1 - r2)) return ball_volume(n, std::min(r1, r2));
    // Radical hyperplane at distance d1 from the first centre.
    double d1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    double d2 = d - d1;
    return ball_cap_volume(n, r1, r1 - d1) + ball_cap_volume(n, r2, r2 - d2);
}

double ball_symmdiff_exact(const BallParams& b1, const BallParams& b2, int n) {
    require(n >= 1, "ball_symmdiff_exact: n >= 1");
    require(b1.radius > 0.0 && b2.radius > 0.0, "ball_symmdiff_exact: radii > 0");
    require(static_cast<int>(b1.centre.size()) == n, "ball_symmdiff_exact: centre dim");
    double d = centre_distance(b1, b2);
    double v1 = ball_volume(n, b1.radius), v2 = ball_volume(n, b2.radius);
    if (d >= b1.radius + b2.radius) return v1 + v2;
    if (d <= std::fabs(b1.radius - b2.radius)) return std::fabs(v1 - v2);
    double lens = ball_intersection_volume(n, b1.radius, b2.radius, d);
    return v1 + v2 - 2.0 * lens;
}

McEstimate ball_symmdiff_montecarlo(const BallParams& b1, const BallParams& b2, int n,
                                    long samples, std::uint64_t seed, int workers) {
    require(samples >= 10000, "ball_symmdiff_montecarlo: samples >= 1e4");
    require(static_cast<int>(b1.centre.size()) == n && static_cast<int>(b2.centre.size()) == n,
            "ball_symmdiff_montecarlo: centre dim");
    std::vector<double> lo(static_cast<size_t>(n)), hi(static_cast<size_t>(n));
    double box_vol = 1.0;
    for (int i = 0; i < n; ++i) {
        lo[static_cast<size_t>(i)] = std::min(b1.centre[static_cast<size_t>(i)] - b1.radius,
                                              b2.centre[static_cast<size_t>(i)] - b2.radius);
        hi[static_cast<size_t>(i)] = std::max(b1.centre[static_cast<size_t>(i)] + b1.radius,
                                              b2.centre[static_cast<size_t>(i)] + b2.radius);
        box_vol *= hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
    }
    require(box_vol > 0.0, "ball_symmdiff_montecarlo: zero-volume bounding box");

    CounterRng rng(seed);
    std::atomic<long> hits{0};
    const long chunk = 65536;
    const long chunks = (samples + chunk - 1) / chunk;
    parallel_for(chunks, workers, [&](long c) {
        long begin = c * chunk, end = std::min(samples, begin + chunk);
        long local = 0;
        std::vector<double> x(static_cast<size_t>(n));
        for (long s = begin; s < end; ++s) {
            for (int i = 0; i < n; ++i)
                x[static_cast<size_t>(i)] =
                    rng.uniform(static_cast<std::uint64_t>(s) * n + i,
                                lo[static_cast<size_t>(i)], hi[static_cast<size_t>(i)]);
            double q1 = 0.0, q2 = 0.0;
            for (int i = 0; i < n; ++i) {
                double u = x[static_cast<size_t>(i)] - b1.centre[static_cast<size_t>(i)];
                double v = x[static_cast<size_t>(i)] - b2.centre[static_cast<size_t>(i)];
                q1 += u * u;
                q2 += v * v;
            }
            bool in1 = q1 <= b1.radius * b1.radius;
            bool in2 = q2 <= b2.radius * b2.radius;
            if (in1 != in2) ++local;
        }
        hits += local;
    });
    double p = static_cast<double>(hits.load()) / static_cast<double>(samples);
    McEstimate e;
    e.samples = samples;
    e.estimate = box_vol * p;
    e.stderr_ = box_vol * std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(samples)));
    return e;
}

SimplexParams sort_vertices(const SimplexParams& s) {
    int m = s.n + 1;
    std::vector<int> order(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) order[static_cast<size_t>(j)] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (int i = 0; i < s.n; ++i) {
            double va = s.vertices[static_cast<size_t>(a * s.n + i)];
            double vb = s.vertices[static_cast<size_t>(b * s.n + i)];
            if (va != vb) return va < vb;
        }
        return false;
    });
    SimplexParams out;
    out.n = s.n;
    out.vertices.resize(s.vertices.size());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < s.n; ++i)
            out.vertices[static_cast<size_t>(j * s.n + i)] =
                s.vertices[static_cast<size_t>(order[static_cast<size_t>(j)] * s.n + i)];
    return out;
}

// Columns of the edge matrix [v1-v0, ..., vn-v0].
static Matrix edge_matrix(const SimplexParams& s) {
    Matrix m(s.n, s.n);
    for (int j = 0; j < s.n; ++j)
        for (int i = 0; i < s.n; ++i)
            m(i, j) = s.vertices[static_cast<size_t>((j + 1) * s.n + i)] -
                      s.vertices[static_cast<size_t>(i)];
    return m;
}

static double det_small(const Matrix& m) {
    if (m.rows == 1) return m(0, 0);
    if (m.rows == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (m.rows == 3)
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    throw invalid_input("det_small: n must be 1..3");
}

static Matrix inverse_small(const Matrix& m, double det) {
    Matrix inv(m.rows, m.cols);
    if (m.rows == 1) {
        inv(0, 0) = 1.0 / det;
    } else if (m.rows == 2) {
        inv(0, 0) = m(1, 1) / det;
        inv(0, 1) = -m(0, 1) / det;
        inv(1, 0) = -m(1, 0) / det;
        inv(1, 1) = m(0, 0) / det;
    } else {
        inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
        inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
        inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
        inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
        inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
        inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
        inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
        inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
        inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
    }
    return inv;
}

double simplex_volume(const SimplexParams& s) {
    require(s.n >= 1 && s.n <= 3, "simplex_volume: n must be 1..3");
    require(static_cast<int>(s.vertices.size()) == s.n * (s.n + 1), "simplex_volume: vertex count");
    double det = det_small(edge_matrix(s));
    require(det != 0.0, "simplex_volume: degenerate simplex");
    double fact = 1.0;
    for (int i = 2; i <= s.n; ++i) fact *= i;
    return std::fabs(det) / fact;
}

// Barycentric membership test with a precomputed inverse of the edge matrix.
struct SimplexTester {
    std::vector<double> v0;
    Matrix inv;
    int n;

    explicit SimplexTester(const SimplexParams& s) : n(s.n) {
        v0 = s.vertex(0);
        Matrix e = edge_matrix(s);
        double det = det_small(e);
        require(det != 0.0, "simplex: degenerate");
        inv = inverse_small(e, det);
    }

    bool contains(const std::vector<double>& x) const {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            double li = 0.0;
            for (int j = 0; j < n; ++j)
                li += inv(i, j) * (x[static_cast<size_t>(j)] - v0[static_cast<size_t>(j)]);
            if (li < 0.0) return false;
            sum += li;
        }
        return sum <= 1.0;
    }
};

std::vector<std::array<double, 2>> clip_convex(const std::vector<std::array<double, 2>>& subject,
                                               const std::vector<std::array<double, 2>>& clip) {
    std::vector<std::array<double, 2>> out = subject;
    const size_t m = clip.size();
    for (size_t e2 = 0, e1 = m - 1; e2 != m; e1 = e2++) {
        if (out.empty()) break;
        std::vector<std::array<double, 2>> in;
        in.swap(out);
        const double ex = clip[e2][0] - clip[e1][0];
        const double ey = clip[e2][1] - clip[e1][1];
        auto side = [&](const std::array<double, 2>& p) {
            return ex * (p[1] - clip[e1][1]) - ey * (p[0] - clip[e1][0]);
        };
        auto intersect = [&](const std::array<double, 2>& p, const std::array<double, 2>& q) {
            double sp = side(p), sq = side(q);
            double t = sp / (sp - sq);
            return std::array<double, 2>{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
        };
        const size_t k = in.size();
        for (size_t v2 = 0, v1 = k - 1; v2 != k; v1 = v2++) {
            double s1 = side(in[v1]), s2 = side(in[v2]);
            if (s2 >= 0.0) {
                if (s1 < 0.0) out.push_back(intersect(in[v1], in[v2]));
                out.push_back(in[v2]);
            } else if (s1 >= 0.0) {
                out.push_back(intersect(in[v1], in[v2]));
            }
        }
    }
    return out;
}

double polygon_area(const std::vector<std::array<double, 2>>& poly) {
    double a = 0.0;
    const size_t m = poly.size();
    if (m < 3) return 0.0;
    for (size_t i = 0, j = m - 1; i != m; j = i++)
        a += poly[j][0] * poly[i][1] - poly[i][0] * poly[j][1];
    return 0.5 * std::fabs(a);
}

static std::vector<std::array<double, 2>> triangle_ccw(const SimplexParams& s) {
    std::vector<std::array<double, 2>> t = {
        {s.vertices[0], s.vertices[1]}, {s.vertices[2], s.vertices[3]}, {s.vertices[4], s.vertices[5]}};
    double cross = (t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) -
                   (t[1][1] - t[0][1]) * (t[2][0] - t[0][0]);
    if (cross < 0.0) std::swap(t[1], t[2]);
    return t;
}

McEstimate simplex_symmdiff_montecarlo(const SimplexParams& s1, const SimplexParams& s2,
                                       long samples, std::uint64_t seed) {
    require(s1.n == s2.n, "simplex pair: dimension mismatch");
    require(samples >= 10000, "simplex_symmdiff_montecarlo: samples >= 1e4");
    const int n = s1.n;
    SimplexTester t1(s1), t2(s2);
    std::vector<double> lo(static_cast<size_t>(n), 1e300), hi(static_cast<size_t>(n), -1e300);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i < n; ++i) {
            lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)],
                                                  std::min(s1.vertices[static_cast<size_t>(j * n + i)],
                                                           s2.vertices[static_cast<size_t>(j * n + i)]));
            hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)],
                                                  std::max(s1.vertices[static_cast<size_t>(j * n + i)],
                                                           s2.vertices[static_cast<size_t>(j * n + i)]));
        }
    }
    double box_vol = 1.0;
    for (int i = 0; i < n; ++i) box_vol *= hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)];
    require(box_vol > 0.0, "simplex_symmdiff_montecarlo: zero-volume bounding box");

    CounterRng rng(seed);
    long hits = 0;
    std::vector<double> x(static_cast<size_t>(n));
    for (long s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i)
            x[static_cast<size_t>(i)] = rng.uniform(static_cast<std::uint64_t>(s) * n + i,
                                                    lo[static_cast<size_t>(i)], hi[static_cast<size_t>(i)]);
        if (t1.contains(x) != t2.contains(x)) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    McEstimate e;
    e.samples = samples;
    e.estimate = box_vol * p;
    e.stderr_ = box_vol * std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(samples)));
    return e;
}

double simplex_symmdiff(const SimplexParams& s1, const SimplexParams& s2,
                        long mc_samples, std::uint64_t mc_seed) {
    require(s1.n == s2.n, "simplex pair: dimension mismatch");
    require(s1.n >= 1 && s1.n <= 3, "simplex_symmdiff: n must be 1..3");
    double vol1 = simplex_volume(s1), vol2 = simplex_volume(s2);
    if (s1.n == 2) {
        auto inter = clip_convex(triangle_ccw(s1), triangle_ccw(s2));
        return vol1 + vol2 - 2.0 * polygon_area(inter);
    }
    if (s1.n == 1) {
        double a1 = std::min(s1.vertices[0], s1.vertices[1]), b1 = std::max(s1.vertices[0], s1.vertices[1]);
        double a2 = std::min(s2.vertices[0], s2.vertices[1]), b2 = std::max(s2.vertices[0], s2.vertices[1]);
        double inter = std::max(0.0, std::min(b1, b2) - std::max(a1, a2));
        return (b1 - a1) + (b2 - a2) - 2.0 * inter;
    }
    return simplex_symmdiff_montecarlo(s1, s2, mc_samples, mc_seed).estimate;
}

const char* ball_case_name(BallCase c) {
    switch (c) {
        case BallCase::Disjoint: return "disjoint";
        case BallCase::Nested: return "nested";
        case BallCase::LensFar: return "lens-far";
        case BallCase::LensNear: return "lens-near";
        default: return "degenerate";
    }
}

BoundReport bilip_certify(const BallParams& b1, const BallParams& b2, int n,
                          double A, double rho, double R) {
    require(n >= 1, "bilip_certify: n >= 1");
    require(A > 0.0 && 0.0 < rho && rho < R, "bilip_certify: need A > 0, 0 < rho < R");
    auto cnorm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double c : v) s += c * c;
        return std::sqrt(s);
    };
    require(cnorm(b1.centre) <= A + 1e-12 && cnorm(b2.centre) <= A + 1e-12,
            "bilip_certify: centres outside admissible box");
    require(b1.radius >= rho - 1e-12 && b1.radius <= R + 1e-12 &&
            b2.radius >= rho - 1e-12 && b2.radius <= R + 1e-12,
            "bilip_certify: radii outside admissible box");

    BoundReport rep;
    double d = centre_distance(b1, b2);
    double dr = std::fabs(b1.radius - b2.radius);
    rep.param_dist = d + dr;
    rep.symmdiff = ball_symmdiff_exact(b1, b2, n);

    const double wn = unit_ball_volume(n);
    const double wn1 = unit_ball_volume(n - 1);
    // Sum norm against Euclidean norm on the (centre, radius) pairs, and the
    // Euclidean diameter of the admissible box B(0,A) x [rho, R].
    rep.norm_equiv_c = std::sqrt(2.0);
    rep.diam_box = std::sqrt(4.0 * A * A + (R - rho) * (R - rho));

    if (rep.param_dist == 0.0) {
        rep.case_ = BallCase::Degenerate;
        rep.ratio_defined = false;
        rep.pass = true;
        return rep;
    }
    rep.ratio_defined = true;
    rep.ratio = rep.symmdiff / rep.param_dist;

    if (d >= b1.radius + b2.radius) {
        rep.case_ = BallCase::Disjoint;
        rep.lower_const = wn * std::pow(rho, n) / (rep.norm_equiv_c * rep.diam_box);
        rep.upper_const = std::pow(2.0, n - 1) * wn * std::pow(R, n - 1);
    } else if (d < dr) {
        rep.case_ = BallCase::Nested;
        rep.lower_const = 0.5 * n * wn * std::pow(rho, n - 1);
        rep.upper_const = n * wn * std::pow(R, n - 1);
    } else if (d > std::max(b1.radius, b2.radius)) {
        rep.case_ = BallCase::LensFar;
        rep.lower_const = wn * std::pow(rho, n - 1) / std::pow(2.0, n);
        rep.upper_const = std::pow(2.0, n - 1) * n * wn * std::pow(R, n - 1);
    } else {
        rep.case_ = BallCase::LensNear;
        rep.lower_const = wn1 * std::pow(rho, n - 1) / std::pow(2.0, n);
        rep.upper_const = std::pow(2.0, n - 1) * n * wn * std::pow(R, n - 1);
    }
    const double slack = 1.0 + 1e-12;
    rep.pass = rep.lower_const * rep.param_dist <= rep.symmdiff * slack &&
               rep.symmdiff <= rep.upper_const * rep.param_dist * slack;
    return rep;
}

}  // namespace invlab::geometry
