#pragma once

namespace depfid {

/// Φ⁻¹(p) for 0 < p < 1 (Wichura's AS 241, about 1e-16 relative accuracy).
double normal_quantile(double p);

double normal_cdf(double x);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t CDF with ν > 0 degrees of freedom.
double student_t_cdf(double x, double nu);

/// Pr(T > x); keeps relative precision far in the upper tail where
/// 1 - student_t_cdf(x) would round to zero.
double student_t_upper_tail(double x, double nu);

} // namespace depfid
