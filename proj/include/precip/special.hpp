#pragma once

namespace precip {

/// Regularized incomplete beta function I_x(a, b).
///
/// Evaluated with the modified Lentz continued fraction, switching to the
/// reflection 1 - I_{1-x}(b, a) when x > (a + 1) / (a + b + 2) so the
/// fraction always converges quickly. Throws DomainError for a <= 0, b <= 0
/// or x outside [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma function P(a, x).
double regularized_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x).
double regularized_upper_gamma(double a, double x);

}  // namespace precip
