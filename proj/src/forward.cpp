#include "invlab/forward.hpp"

#include <algorithm>
#include <cmath>

namespace invlab::forward {

using funcspace::FunctionRep;
using manifolds::Family;
using manifolds::FamilyTag;

const char* forward_name(ForwardKind k) {
    switch (k) {
        case ForwardKind::Identity: return "identity";
        case ForwardKind::Integration: return "integration";
        default: return "multiply-weight";
    }
}

ForwardKind forward_from_name(const std::string& name) {
    if (name == "identity") return ForwardKind::Identity;
    if (name == "integration") return ForwardKind::Integration;
    if (name == "multiply-weight") return ForwardKind::MultiplyWeight;
    throw invalid_input("unknown forward operator: " + name);
}

bool compatible(const ForwardOp& op, const funcspace::Domain& d) {
    if (op.kind == ForwardKind::Identity) return true;
    return d.kind == funcspace::DomainKind::UnitInterval;
}

static double weight_g(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

static constexpr int kGridSize = 4097;

FunctionRep apply_forward(const ForwardOp& op, const FunctionRep& f) {
    require(compatible(op, f.domain()), "apply_forward: operator/domain mismatch");
    switch (op.kind) {
        case ForwardKind::Identity:
            return f;
        case ForwardKind::Integration: {
            if (const auto* ind = std::get_if<funcspace::IntervalIndicator>(&f.node)) {
                // (t-a) chi_[a,1](t) - (t-b) chi_[b,1](t), scaled by the intensity.
                std::vector<double> breaks{0.0}, slope, offset;
                double lam = ind->intensity;
                if (ind->a > 0.0) {
                    breaks.push_back(ind->a);
                    slope.push_back(0.0);
                    offset.push_back(0.0);
                }
                if (ind->b < 1.0) {
                    breaks.push_back(ind->b);
                    slope.push_back(lam);
                    offset.push_back(-lam * ind->a);
                    breaks.push_back(1.0);
                    slope.push_back(0.0);
                    offset.push_back(lam * (ind->b - ind->a));
                } else {
                    breaks.push_back(1.0);
                    slope.push_back(lam);
                    offset.push_back(-lam * ind->a);
                }
                return funcspace::make_piecewise_linear(std::move(breaks), std::move(slope),
                                                        std::move(offset));
            }
            // General kinds: exact cumulative integral of the piecewise-linear
            // form evaluated on a uniform grid.
            funcspace::PiecewiseLinear pwl = funcspace::to_piecewise_linear(f);
            std::vector<double> values(kGridSize, 0.0);
            double acc = 0.0;
            size_t piece = 0;
            double prev = 0.0;
            for (int i = 1; i < kGridSize; ++i) {
                double t = static_cast<double>(i) / (kGridSize - 1);
                double from = prev;
                while (piece + 2 < pwl.breaks.size() && pwl.breaks[piece + 1] <= t) {
                    double u = std::max(from, pwl.breaks[piece]);
                    double w = pwl.breaks[piece + 1];
                    acc += 0.5 * pwl.slope[piece] * (w * w - u * u) + pwl.offset[piece] * (w - u);
                    from = w;
                    ++piece;
                }
                acc += 0.5 * pwl.slope[piece] * (t * t - from * from) + pwl.offset[piece] * (t - from);
                values[static_cast<size_t>(i)] = acc;
                prev = t;
            }
            return funcspace::make_sampled_grid(std::move(values));
        }
        default: {
            std::vector<double> values(kGridSize, 0.0);
            for (int i = 0; i < kGridSize; ++i) {
                double t = static_cast<double>(i) / (kGridSize - 1);
                values[static_cast<size_t>(i)] = weight_g(t) * funcspace::evaluate1(f, t);
            }
            return funcspace::make_sampled_grid(std::move(values));
        }
    }
}

static FunctionRep zero_on_unit_interval() {
    return funcspace::make_piecewise_linear({0.0, 1.0}, {0.0}, {0.0});
}

static FunctionRep interval_integration_differential(const std::vector<double>& h,
                                                     const std::vector<double>& dir) {
    // h2 chi_[b,1] - h1 chi_[a,1] as a piecewise-constant function.
    double a = h[0], b = h[1], h1 = dir[0], h2 = dir[1];
    std::vector<double> breaks{0.0}, slope, offset;
    if (a > 0.0) {
        breaks.push_back(a);
        slope.push_back(0.0);
        offset.push_back(0.0);
    }
    breaks.push_back(b);
    slope.push_back(0.0);
    offset.push_back(-h1);
    breaks.push_back(1.0);
    slope.push_back(0.0);
    offset.push_back(h2 - h1);
    return funcspace::make_piecewise_linear(std::move(breaks), std::move(slope), std::move(offset));
}

FunctionRep chart_differential(const ForwardOp& op, const Family& family,
                               const std::vector<double>& h, const std::vector<double>& direction,
                               DiffMode mode) {
    require(static_cast<int>(h.size()) == family.chart_dim(), "chart_differential: h dimension");
    require(direction.size() == h.size(), "chart_differential: direction dimension");
    require(family.in_chart(h), "chart_differential: h outside chart image");

    double dir_norm = 0.0;
    for (double d : direction) dir_norm += d * d;
    dir_norm = std::sqrt(dir_norm);

    bool closed_interval =
        op.kind == ForwardKind::Integration && family.tag == FamilyTag::Interval;
    bool closed_gaussian = op.kind == ForwardKind::Identity && family.tag == FamilyTag::Gaussian;

    if (mode != DiffMode::FiniteDifference && closed_interval) {
        if (dir_norm == 0.0) return zero_on_unit_interval();
        return interval_integration_differential(h, direction);
    }
    if (mode != DiffMode::FiniteDifference && closed_gaussian)
        return manifolds::gaussian_chart_derivative(h, direction);

    // Finite differences of the forward image, sampled on a grid. Only valid
    // when the image varies continuously pointwise.
    require(op.kind == ForwardKind::Integration && family.tag == FamilyTag::Interval,
            "chart_differential: no differential available for this operator/family pair");
    if (dir_norm == 0.0) return zero_on_unit_interval();
    double h_norm = 0.0;
    for (double c : h) h_norm += c * c;
    double step = 1e-6 * (1.0 + std::sqrt(h_norm));
    require(step > 0.0, "chart_differential: step underflow");
    std::vector<double> hp = h, hm = h;
    for (size_t i = 0; i < h.size(); ++i) {
        hp[i] += step * direction[i];
        hm[i] -= step * direction[i];
    }
    require(family.in_chart(hp) && family.in_chart(hm),
            "chart_differential: finite-difference stencil leaves the chart");
    FunctionRep fp = apply_forward(op, family.embed(family.make_point(hp)));
    FunctionRep fm = apply_forward(op, family.embed(family.make_point(hm)));
    // Both images are piecewise linear here, so the quotient is exact.
    funcspace::PiecewiseLinear diff =
        funcspace::pwl_subtract(funcspace::to_piecewise_linear(fp),
                                funcspace::to_piecewise_linear(fm));
    for (size_t i = 0; i < diff.slope.size(); ++i) {
        diff.slope[i] /= 2.0 * step;
        diff.offset[i] /= 2.0 * step;
    }
    return FunctionRep{std::move(diff)};
}

double differential_continuity_modulus(const Family& family, const std::vector<double>& h1,
                                       const std::vector<double>& h2, int sweep_directions) {
    require(family.tag == FamilyTag::Interval, "differential_continuity_modulus: interval family only");
    require(family.in_chart(h1) && family.in_chart(h2),
            "differential_continuity_modulus: points outside chart image");
    require(sweep_directions >= 4, "differential_continuity_modulus: sweep too sparse");
    double a1 = h1[0], b1 = h1[1], a2 = h2[0], b2 = h2[1];
    std::vector<double> cuts{0.0, a1, a2, b1, b2, 1.0};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double best = 0.0;
    for (int j = 0; j < sweep_directions; ++j) {
        double theta = 2.0 * kPi * j / sweep_directions;
        double u1 = std::cos(theta), u2 = std::sin(theta);
        // (dF_{h1} - dF_{h2})(u) = u2 (chi_[b1,1] - chi_[b2,1]) - u1 (chi_[a1,1] - chi_[a2,1]),
        // piecewise constant on the cut partition.
        double norm1 = 0.0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            double v = u2 * ((mid >= b1 ? 1.0 : 0.0) - (mid >= b2 ? 1.0 : 0.0)) -
                       u1 * ((mid >= a1 ? 1.0 : 0.0) - (mid >= a2 ? 1.0 : 0.0));
            norm1 += std::fabs(v) * (cuts[i + 1] - cuts[i]);
        }
        best = std::max(best, norm1);
    }
    return best;
}

}  // namespace invlab::forward
