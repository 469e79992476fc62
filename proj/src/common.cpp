#include "invlab/common.hpp"

#include <cmath>
#include <thread>

namespace invlab {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

std::vector<double> transpose_apply(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(static_cast<size_t>(a.cols), 0.0);
    for (long i = 0; i < a.rows; ++i) {
        const double xi = x[static_cast<size_t>(i)];
        for (long j = 0; j < a.cols; ++j) y[static_cast<size_t>(j)] += a(i, j) * xi;
    }
    return y;
}

double spectral_norm(const Matrix& a) {
    if (a.rows == 0 || a.cols == 0) return 0.0;
    std::vector<double> v(static_cast<size_t>(a.cols), 1.0 / std::sqrt(double(a.cols)));
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        // w = A^T (A v)
        std::vector<double> av(static_cast<size_t>(a.rows), 0.0);
        for (long i = 0; i < a.rows; ++i) {
            double s = 0.0;
            for (long j = 0; j < a.cols; ++j) s += a(i, j) * v[static_cast<size_t>(j)];
            av[static_cast<size_t>(i)] = s;
        }
        std::vector<double> w = transpose_apply(a, av);
        double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        double next = nw;
        for (auto& c : w) c /= nw;
        v = std::move(w);
        if (it > 4 && std::fabs(next - lambda) <= 1e-14 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_line: need >= 2 points");
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    require(denom != 0.0, "fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
    if (n <= 0) return;
    if (workers < 1) workers = 1;
    if (workers == 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    long nthreads = std::min<long>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (long t = 0; t < nthreads; ++t) {
        pool.emplace_back([=, &fn]() {
            for (long i = t; i < n; i += nthreads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace invlab
