#pragma once

namespace autotune {

// Degrees of freedom of an F distribution.
struct FParams {
  double d1 = 1.0;
  double d2 = 1.0;
};

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Throws InputError outside 0 <= x <= 1, a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

// P(F <= x) for F ~ F(d1, d2).
double f_cdf(double x, FParams params);

// Upper-alpha point: the x with f_cdf(x) = 1 - alpha.
double f_quantile(double alpha, FParams params);

}  // namespace autotune
