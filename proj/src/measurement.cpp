#include "invlab/measurement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "invlab/quadrature.hpp"
#include "invlab/rng.hpp"
#include "invlab/special.hpp"

namespace invlab::measurement {

using cd = std::complex<double>;
using funcspace::FunctionRep;
using manifolds::Family;
using manifolds::FamilyTag;

double fejer_weight(int k, int N) {
    require(std::abs(k) <= N, "fejer_weight: |k| <= N");
    return 1.0 - static_cast<double>(std::abs(k)) / (N + 1);
}

Measurement project_fejer(const FunctionRep& f, int N) {
    require(N >= 0, "project_fejer: N >= 0");
    require(f.domain().kind == funcspace::DomainKind::UnitInterval,
            "project_fejer: function must live on [0,1]");
    auto c = funcspace::fourier_coefficients(f, N);
    Measurement m;
    m.N = N;
    m.space_dim = 1;
    m.period = 1.0;
    m.coeffs.resize(static_cast<size_t>(2 * N + 1));
    m.coeffs[0] = c[static_cast<size_t>(N)].real();
    const double rt2 = std::sqrt(2.0);
    for (int k = 1; k <= N; ++k) {
        double w = fejer_weight(k, N);
        m.coeffs[static_cast<size_t>(2 * k - 1)] = rt2 * w * c[static_cast<size_t>(N + k)].real();
        m.coeffs[static_cast<size_t>(2 * k)] = rt2 * w * c[static_cast<size_t>(N + k)].imag();
    }
    return m;
}

static void check_shape(const Measurement& a, const Measurement& b, const char* who) {
    require(a.N == b.N && a.space_dim == b.space_dim && a.period == b.period &&
                a.coeffs.size() == b.coeffs.size(),
            std::string(who) + ": mismatched measurement shapes");
}

double measurement_inner(const Measurement& a, const Measurement& b) {
    check_shape(a, b, "measurement_inner");
    return dot(a.coeffs, b.coeffs);
}

double measurement_norm(const Measurement& a) { return norm2(a.coeffs); }

Measurement measurement_sub(const Measurement& a, const Measurement& b) {
    check_shape(a, b, "measurement_sub");
    Measurement out = a;
    for (size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
    return out;
}

double fejer_evaluate(const Measurement& m, double t) {
    require(m.space_dim == 1, "fejer_evaluate: circle measurements only");
    const double rt2inv = 1.0 / std::sqrt(2.0);
    double v = m.coeffs[0];
    cd rot = std::exp(cd(0.0, 2.0 * kPi * t));
    cd ek = rot;
    for (int k = 1; k <= m.N; ++k) {
        double re = m.coeffs[static_cast<size_t>(2 * k - 1)] * rt2inv;
        double im = m.coeffs[static_cast<size_t>(2 * k)] * rt2inv;
        v += 2.0 * (re * ek.real() - im * ek.imag());
        ek *= rot;
    }
    return v;
}

std::string measurement_to_csv(const Measurement& m) {
    require(m.space_dim == 1, "measurement_to_csv: circle measurements only");
    std::string out = std::to_string(m.N);
    char buf[40];
    for (double c : m.coeffs) {
        std::snprintf(buf, sizeof buf, ",%.17g", c);
        out += buf;
    }
    return out;
}

Measurement measurement_from_csv(const std::string& line) {
    std::stringstream ss(line);
    std::string tok;
    require(static_cast<bool>(std::getline(ss, tok, ',')), "measurement_from_csv: empty line");
    Measurement m;
    m.N = std::stoi(tok);
    require(m.N >= 0, "measurement_from_csv: N >= 0");
    m.space_dim = 1;
    m.period = 1.0;
    while (std::getline(ss, tok, ',')) m.coeffs.push_back(std::stod(tok));
    require(static_cast<int>(m.coeffs.size()) == 2 * m.N + 1,
            "measurement_from_csv: expected 2N+1 coefficients");
    return m;
}

double qn_operator_norm_bound() { return 1.0; }

static std::atomic<long> g_measure_calls{0};
long measure_call_count() { return g_measure_calls.load(); }

Measurement add_noise(const Measurement& m, double sigma, std::uint64_t seed) {
    require(sigma >= 0.0, "add_noise: sigma >= 0");
    Measurement out = m;
    CounterRng rng(seed);
    for (size_t i = 0; i < out.coeffs.size(); ++i) {
        double u1 = rng.uniform(2 * i) + 1e-300;
        double u2 = rng.uniform(2 * i + 1);
        out.coeffs[i] += sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
    return out;
}

// ---- measurement operator ----

namespace {

double support_extent(const Family& fam) {
    switch (fam.tag) {
        case FamilyTag::Ball:
        case FamilyTag::BallIntensity:
            return fam.A + fam.R;
        case FamilyTag::Gaussian:
            return fam.A + 8.0;
        case FamilyTag::Simplex: {
            double m = 0.0;
            for (size_t i = 0; i < fam.K.box.hi.size(); ++i)
                m = std::max(m, std::max(std::fabs(fam.K.box.lo[i]), std::fabs(fam.K.box.hi[i])));
            return m;
        }
        default:
            return 0.5;
    }
}

struct CoeffValue {
    cd value;
    std::vector<cd> d_coords;  // derivative against each chart coordinate
};

// Radial factor of the ball transform and its radius derivative, n in {1,2}.
void ball_radial(int n, double r, double xi, double& radial, double& dradial) {
    if (xi == 0.0) {
        radial = unit_ball_volume(n) * std::pow(r, n);
        dradial = n * unit_ball_volume(n) * std::pow(r, n - 1);
        return;
    }
    double z = 2.0 * kPi * r * xi;
    if (n == 1) {
        radial = std::sin(z) / (kPi * xi);
        dradial = 2.0 * std::cos(z);
    } else {
        radial = r * std::cyl_bessel_j(1.0, z) / xi;
        dradial = 2.0 * kPi * r * std::cyl_bessel_j(0.0, z);
    }
}

CoeffValue ball_coeff(const Family& fam, const std::vector<double>& h,
                      const std::array<int, 2>& k, double period, bool with_derivs) {
    const int n = fam.ambient_dim;
    const bool has_lambda = fam.tag == FamilyTag::BallIntensity;
    const double r = h[static_cast<size_t>(n)];
    const double lambda = has_lambda ? h[static_cast<size_t>(n + 1)] : 1.0;
    double xi2 = 0.0, phase = 0.0;
    for (int j = 0; j < n; ++j) {
        double xij = k[static_cast<size_t>(j)] / period;
        xi2 += xij * xij;
        phase += xij * h[static_cast<size_t>(j)];
    }
    double xi = std::sqrt(xi2);
    double radial, dradial;
    ball_radial(n, r, xi, radial, dradial);
    cd e = std::exp(cd(0.0, -2.0 * kPi * phase));
    double scale = lambda / std::pow(period, n);
    CoeffValue out;
    out.value = scale * radial * e;
    if (with_derivs) {
        out.d_coords.resize(h.size());
        for (int j = 0; j < n; ++j) {
            double xij = k[static_cast<size_t>(j)] / period;
            out.d_coords[static_cast<size_t>(j)] = out.value * cd(0.0, -2.0 * kPi * xij);
        }
        out.d_coords[static_cast<size_t>(n)] = scale * dradial * e;
        if (has_lambda) out.d_coords[static_cast<size_t>(n + 1)] = out.value / lambda;
    }
    return out;
}

CoeffValue gaussian_coeff(const Family& fam, const std::vector<double>& h,
                          const std::array<int, 2>& k, double period, bool with_derivs) {
    const int n = fam.ambient_dim;
    double xi2 = 0.0, phase = 0.0;
    for (int j = 0; j < n; ++j) {
        double xij = k[static_cast<size_t>(j)] / period;
        xi2 += xij * xij;
        phase += xij * h[static_cast<size_t>(j)];
    }
    cd e = std::exp(cd(0.0, -2.0 * kPi * phase));
    double scale = std::pow(kPi, 0.5 * n) * std::exp(-kPi * kPi * xi2) / std::pow(period, n);
    CoeffValue out;
    out.value = scale * e;
    if (with_derivs) {
        out.d_coords.resize(h.size());
        for (int j = 0; j < n; ++j) {
            double xij = k[static_cast<size_t>(j)] / period;
            out.d_coords[static_cast<size_t>(j)] = out.value * cd(0.0, -2.0 * kPi * xij);
        }
    }
    return out;
}

// Triangle transform on the Duffy-mapped unit square; the integrand is smooth
// in the vertices, so the analytic in-loop derivative and a finite difference
// of the quadrature value agree to quadrature accuracy.
CoeffValue simplex_coeff(const std::vector<double>& v, const std::array<int, 2>& k,
                         double period, bool with_derivs) {
    const double v0x = v[0], v0y = v[1], v1x = v[2], v1y = v[3], v2x = v[4], v2y = v[5];
    const double xix = k[0] / period, xiy = k[1] / period;
    double det = (v1x - v0x) * (v2y - v0y) - (v1y - v0y) * (v2x - v0x);
    double sgn = det >= 0.0 ? 1.0 : -1.0;
    double dDet[6] = {(v1y - v2y), (v2x - v1x), (v2y - v0y), (v0x - v2x), (v0y - v1y), (v1x - v0x)};

    const GaussRule& g = gauss_legendre(20);
    CoeffValue out;
    out.value = cd(0.0, 0.0);
    if (with_derivs) out.d_coords.assign(6, cd(0.0, 0.0));
    for (size_t is = 0; is < g.nodes.size(); ++is) {
        double s = 0.5 * (g.nodes[is] + 1.0);
        double ws = 0.5 * g.weights[is];
        for (size_t it = 0; it < g.nodes.size(); ++it) {
            double t = 0.5 * (g.nodes[it] + 1.0);
            double wt = 0.5 * g.weights[it];
            double w0 = 1.0 - s - t * (1.0 - s), w1 = s, w2 = t * (1.0 - s);
            double x = w0 * v0x + w1 * v1x + w2 * v2x;
            double y = w0 * v0y + w1 * v1y + w2 * v2y;
            cd e = std::exp(cd(0.0, -2.0 * kPi * (xix * x + xiy * y)));
            double jac = (1.0 - s) * ws * wt;
            out.value += std::fabs(det) * jac * e;
            if (with_derivs) {
                double wm[3] = {w0, w1, w2};
                for (int m = 0; m < 3; ++m) {
                    out.d_coords[static_cast<size_t>(2 * m)] +=
                        jac * e *
                        (sgn * dDet[2 * m] + std::fabs(det) * cd(0.0, -2.0 * kPi * xix) * wm[m]);
                    out.d_coords[static_cast<size_t>(2 * m + 1)] +=
                        jac * e *
                        (sgn * dDet[2 * m + 1] + std::fabs(det) * cd(0.0, -2.0 * kPi * xiy) * wm[m]);
                }
            }
        }
    }
    double scale = 1.0 / (period * period);
    out.value *= scale;
    if (with_derivs)
        for (auto& d : out.d_coords) d *= scale;
    return out;
}

CoeffValue euclidean_coeff(const Family& fam, const std::vector<double>& h,
                           const std::array<int, 2>& k, double period, bool with_derivs) {
    switch (fam.tag) {
        case FamilyTag::Ball:
        case FamilyTag::BallIntensity:
            return ball_coeff(fam, h, k, period, with_derivs);
        case FamilyTag::Gaussian:
            return gaussian_coeff(fam, h, k, period, with_derivs);
        case FamilyTag::Simplex:
            return simplex_coeff(h, k, period, with_derivs);
        default:
            throw invalid_input("euclidean_coeff: unsupported family");
    }
}

}  // namespace

MeasurementOperator::MeasurementOperator(const Family& family, const forward::ForwardOp& op, int N)
    : family_(family), op_(op), N_(N) {
    require(N >= 0, "measurement operator: N >= 0");
    if (family.tag == FamilyTag::Interval) {
        dim_ = 2L * N + 1;
        period_ = 1.0;
        return;
    }
    require(op.kind == forward::ForwardKind::Identity,
            "measurement operator: Euclidean families support the identity operator only");
    require(family.ambient_dim <= 2, "measurement operator: Euclidean families need dimension <= 2");
    if (family.tag == FamilyTag::Simplex)
        require(family.ambient_dim == 2, "measurement operator: simplex measurements need n = 2");
    period_ = 2.0 * support_extent(family) + 1.0;
    if (family.ambient_dim == 1) {
        for (int k = 1; k <= N; ++k) klist_.push_back({k, 0});
    } else {
        for (int k2 = 1; k2 <= N; ++k2) klist_.push_back({0, k2});
        for (int k1 = 1; k1 <= N; ++k1)
            for (int k2 = -N; k2 <= N; ++k2) klist_.push_back({k1, k2});
    }
    dim_ = 1 + 2L * static_cast<long>(klist_.size());
}

Measurement MeasurementOperator::measure(const std::vector<double>& h) const {
    ++g_measure_calls;
    require(family_.in_chart(h), "measure: h outside chart image");
    if (family_.tag == FamilyTag::Interval) {
        if (op_.kind == forward::ForwardKind::Integration ||
            op_.kind == forward::ForwardKind::Identity)
            return measure_interval_closed(h);
        FunctionRep f = forward::apply_forward(op_, family_.embed(family_.make_point(h)));
        return project_fejer(f, N_);
    }
    Measurement m;
    m.N = N_;
    m.space_dim = family_.ambient_dim;
    m.period = period_;
    m.coeffs.resize(static_cast<size_t>(dim_));
    const double scale = std::pow(period_, 0.5 * family_.ambient_dim);
    const double rt2 = std::sqrt(2.0);
    m.coeffs[0] = scale * euclidean_coeff(family_, h, {0, 0}, period_, false).value.real();
    for (size_t i = 0; i < klist_.size(); ++i) {
        const auto& k = klist_[i];
        double w = fejer_weight(k[0], N_) * fejer_weight(k[1], N_);
        cd c = euclidean_coeff(family_, h, k, period_, false).value;
        m.coeffs[1 + 2 * i] = scale * rt2 * w * c.real();
        m.coeffs[2 + 2 * i] = scale * rt2 * w * c.imag();
    }
    return m;
}

// Allocation-free coefficient loop for the lattice-scan hot path. The k-th
// coefficient of the primitive of u obeys c_k = (c_k(u) - c_0(u)) / (2 pi i k)
// with c_k(u) = (e^{-2 pi i k a} - e^{-2 pi i k b}) / (2 pi i k).
Measurement MeasurementOperator::measure_interval_closed(const std::vector<double>& h) const {
    const double a = h[0], b = h[1];
    const bool integrate = op_.kind == forward::ForwardKind::Integration;
    Measurement m;
    m.N = N_;
    m.space_dim = 1;
    m.period = 1.0;
    m.coeffs.resize(static_cast<size_t>(dim_));
    m.coeffs[0] = integrate ? (b - a) * (1.0 - 0.5 * (a + b)) : (b - a);
    const double rt2 = std::sqrt(2.0);
    const cd ea1 = std::exp(cd(0.0, -2.0 * kPi * a));
    const cd eb1 = std::exp(cd(0.0, -2.0 * kPi * b));
    cd ea = ea1, eb = eb1;
    const double c0u = b - a;
    for (int k = 1; k <= N_; ++k) {
        const cd tpik(0.0, 2.0 * kPi * k);
        cd cku = (ea - eb) / tpik;
        cd ck = integrate ? (cku - c0u) / tpik : cku;
        double w = rt2 * fejer_weight(k, N_);
        m.coeffs[static_cast<size_t>(2 * k - 1)] = w * ck.real();
        m.coeffs[static_cast<size_t>(2 * k)] = w * ck.imag();
        ea *= ea1;
        eb *= eb1;
    }
    return m;
}

bool MeasurementOperator::jacobian_is_closed_form() const {
    if (family_.tag == FamilyTag::Interval)
        return op_.kind == forward::ForwardKind::Integration ||
               op_.kind == forward::ForwardKind::Identity;
    return true;
}

Matrix MeasurementOperator::jacobian(const std::vector<double>& h) const {
    require(family_.in_chart(h), "jacobian: h outside chart image");
    const int m = family_.chart_dim();
    if (family_.tag == FamilyTag::Interval) {
        if (!jacobian_is_closed_form()) return jacobian_fd(h);
        Matrix out(dim_, m);
        const double a = h[0], b = h[1];
        const double rt2 = std::sqrt(2.0);
        // Coefficient derivatives of the measured map. Under Integration the
        // columns are the projected differentials -chi_[a,1] and chi_[b,1];
        // under Identity they are -e^{-2 pi i k a} and e^{-2 pi i k b}.
        for (int k = 0; k <= N_; ++k) {
            cd da, db;
            if (op_.kind == forward::ForwardKind::Integration) {
                if (k == 0) {
                    da = -(1.0 - a);
                    db = (1.0 - b);
                } else {
                    const cd tpik(0.0, 2.0 * kPi * k);
                    da = -(std::exp(cd(0.0, -2.0 * kPi * k * a)) - 1.0) / tpik;
                    db = (std::exp(cd(0.0, -2.0 * kPi * k * b)) - 1.0) / tpik;
                }
            } else {
                if (k == 0) {
                    da = -1.0;
                    db = 1.0;
                } else {
                    da = -std::exp(cd(0.0, -2.0 * kPi * k * a));
                    db = std::exp(cd(0.0, -2.0 * kPi * k * b));
                }
            }
            double w = fejer_weight(k, N_);
            if (k == 0) {
                out(0, 0) = w * da.real();
                out(0, 1) = w * db.real();
            } else {
                out(2 * k - 1, 0) = rt2 * w * da.real();
                out(2 * k, 0) = rt2 * w * da.imag();
                out(2 * k - 1, 1) = rt2 * w * db.real();
                out(2 * k, 1) = rt2 * w * db.imag();
            }
        }
        return out;
    }
    Matrix out(dim_, m);
    const double scale = std::pow(period_, 0.5 * family_.ambient_dim);
    const double rt2 = std::sqrt(2.0);
    CoeffValue c0 = euclidean_coeff(family_, h, {0, 0}, period_, true);
    for (int j = 0; j < m; ++j) out(0, j) = scale * c0.d_coords[static_cast<size_t>(j)].real();
    for (size_t i = 0; i < klist_.size(); ++i) {
        const auto& k = klist_[i];
        double w = fejer_weight(k[0], N_) * fejer_weight(k[1], N_);
        CoeffValue c = euclidean_coeff(family_, h, k, period_, true);
        for (int j = 0; j < m; ++j) {
            out(static_cast<long>(1 + 2 * i), j) = scale * rt2 * w * c.d_coords[static_cast<size_t>(j)].real();
            out(static_cast<long>(2 + 2 * i), j) = scale * rt2 * w * c.d_coords[static_cast<size_t>(j)].imag();
        }
    }
    return out;
}

Matrix MeasurementOperator::jacobian_fd(const std::vector<double>& h) const {
    require(family_.in_chart(h), "jacobian_fd: h outside chart image");
    const int m = family_.chart_dim();
    double h_norm = 0.0;
    for (double c : h) h_norm += c * c;
    const double step = 1e-6 * (1.0 + std::sqrt(h_norm));
    Matrix out(dim_, m);
    for (int j = 0; j < m; ++j) {
        std::vector<double> hp = h, hm = h;
        hp[static_cast<size_t>(j)] += step;
        hm[static_cast<size_t>(j)] -= step;
        require(family_.in_chart(hp) && family_.in_chart(hm),
                "jacobian_fd: stencil leaves the chart");
        Measurement mp = measure(hp), mm = measure(hm);
        for (long i = 0; i < dim_; ++i)
            out(i, j) = (mp.coeffs[static_cast<size_t>(i)] - mm.coeffs[static_cast<size_t>(i)]) /
                        (2.0 * step);
    }
    return out;
}

double projection_deficit(const forward::ForwardOp& op, const Family& family, int N,
                          long sample_count, std::uint64_t seed, int workers) {
    require(family.tag == FamilyTag::Interval,
            "projection_deficit: defined for unit-interval families");
    require(sample_count >= 1, "projection_deficit: empty sample");
    auto pts = family.sample_compact(sample_count, seed);
    std::vector<double> deficits(pts.size(), 0.0);
    parallel_for(static_cast<long>(pts.size()), workers, [&](long i) {
        FunctionRep f = forward::apply_forward(op, family.embed(pts[static_cast<size_t>(i)]));
        Measurement m = project_fejer(f, N);
        std::vector<double> splits = funcspace::breakpoints(f);
        int grid = std::max(64, 4 * (N + 1));
        for (int g = 1; g < grid; ++g) splits.push_back(static_cast<double>(g) / grid);
        auto integrand = [&](double t) {
            return std::fabs(funcspace::evaluate1(f, t) - fejer_evaluate(m, t));
        };
        deficits[static_cast<size_t>(i)] = integrate_split(integrand, splits, 1, 12);
    });
    double sup = 0.0;
    for (double d : deficits) sup = std::max(sup, d);
    return sup;
}

}  // namespace invlab::measurement
