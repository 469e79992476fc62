#pragma once

namespace invlab {

// Lebesgue measure of the unit ball in R^n; omega_0 = 1 by convention.
double unit_ball_volume(int n);

// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// Volume of a spherical cap of height h (0 <= h <= 2r) of an n-ball of
// radius r, via the regularized incomplete beta function.
double ball_cap_volume(int n, double r, double h);

// Same cap volume through the elementary n in {1,2,3} formulas; used as an
// independent cross-check of the beta-function route.
double ball_cap_volume_elementary(int n, double r, double h);

}  // namespace invlab
