#include "invlab/special.hpp"

#include <cmath>

#include "invlab/common.hpp"

namespace invlab {

double unit_ball_volume(int n) {
    require(n >= 0, "unit_ball_volume: n >= 0");
    if (n == 0) return 1.0;
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Continued fraction for the incomplete beta function (modified Lentz).
static double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    require(a > 0.0 && b > 0.0, "reg_inc_beta: a,b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   a * std::log(x) + b * std::log1p(-x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double ball_cap_volume(int n, double r, double h) {
    require(n >= 1, "ball_cap_volume: n >= 1");
    require(r > 0.0, "ball_cap_volume: r > 0");
    if (h <= 0.0) return 0.0;
    if (h >= 2.0 * r) return unit_ball_volume(n) * std::pow(r, n);
    if (h > r) return unit_ball_volume(n) * std::pow(r, n) - ball_cap_volume(n, r, 2.0 * r - h);
    double d = r - h;  // distance from centre to the cutting hyperplane
    double x = 1.0 - (d / r) * (d / r);
    return 0.5 * unit_ball_volume(n) * std::pow(r, n) * reg_inc_beta(0.5 * (n + 1), 0.5, x);
}

double ball_cap_volume_elementary(int n, double r, double h) {
    require(n >= 1 && n <= 3, "ball_cap_volume_elementary: n must be 1..3");
    require(r > 0.0, "ball_cap_volume_elementary: r > 0");
    if (h <= 0.0) return 0.0;
    if (h >= 2.0 * r) h = 2.0 * r;
    double d = r - h;  // signed: negative once the cap passes the centre
    switch (n) {
        case 1:
            return h;
        case 2:
            return r * r * std::acos(d / r) - d * std::sqrt(std::max(0.0, r * r - d * d));
        default:
            return kPi * h * h * (3.0 * r - h) / 3.0;
    }
}

}  // namespace invlab
