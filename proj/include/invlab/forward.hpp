#pragma once

#include "invlab/funcspace.hpp"
#include "invlab/manifolds.hpp"

namespace invlab::forward {

enum class ForwardKind { Identity, Integration, MultiplyWeight };
const char* forward_name(ForwardKind k);
ForwardKind forward_from_name(const std::string& name);

struct ForwardOp {
    ForwardKind kind = ForwardKind::Integration;
};

bool compatible(const ForwardOp& op, const funcspace::Domain& d);

// Identity passes through; Integration maps u to t -> int_0^t u(s) ds with a
// closed piecewise-linear form for interval indicators; MultiplyWeight
// multiplies by the 1-periodic weight exp(-1/t) (sampled representation).
funcspace::FunctionRep apply_forward(const ForwardOp& op, const funcspace::FunctionRep& f);

enum class DiffMode { Auto, ClosedForm, FiniteDifference };

// Derivative of h -> F(phi^{-1}(h)) along `direction`, as a function.
// Closed form exists for Integration over the interval family and for the
// Gaussian family under Identity. The finite-difference mode builds the
// central difference quotient of the forward images on a sample grid and is
// only meaningful when those images vary continuously pointwise (interval
// family under Integration); indicator families under Identity have no
// function-space differential and are rejected.
funcspace::FunctionRep chart_differential(const ForwardOp& op, const manifolds::Family& family,
                                          const std::vector<double>& h,
                                          const std::vector<double>& direction,
                                          DiffMode mode = DiffMode::Auto);

// Operator-norm distance of the two interval-family differentials under
// Integration, maximized over a sweep of unit directions. A lower bound of
// the true operator norm whose accuracy grows with the sweep density.
double differential_continuity_modulus(const manifolds::Family& family,
                                       const std::vector<double>& h1,
                                       const std::vector<double>& h2,
                                       int sweep_directions = 720);

}  // namespace invlab::forward
