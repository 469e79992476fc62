#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace invlab {

// Precondition failure on caller-supplied data. CLI maps this to exit code 2.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure detected mid-computation (divergence, exhausted grid, ...).
class numeric_failure : public std::runtime_error {
public:
    explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_input(msg);
}

inline constexpr double kPi = 3.14159265358979323846;

// Dense row-major matrix, just enough for Jacobians and small Gram matrices.
struct Matrix {
    long rows = 0;
    long cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(long r, long c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(long i, long j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(long i, long j) const { return data[static_cast<size_t>(i) * cols + j]; }
};

// Largest singular value via power iteration on A^T A. Deterministic start.
double spectral_norm(const Matrix& a);

// y = A^T x  (x has a.rows entries).
std::vector<double> transpose_apply(const Matrix& a, const std::vector<double>& x);

double dot(const std::vector<double>& x, const std::vector<double>& y);
double norm2(const std::vector<double>& x);

// Least-squares slope and intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(i) for i in [0, n) split across `workers` threads. The work must be
// pure per index; any output goes into preallocated index-addressed storage so
// the result does not depend on the worker count.
void parallel_for(long n, int workers, const std::function<void(long)>& fn);

}  // namespace invlab
