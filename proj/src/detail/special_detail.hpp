#pragma once

#include <functional>

namespace precip::detail {

// I_x(a, b) and 1 - I_x(a, b) given both x and xc = 1 - x. Passing the
// complement separately keeps the upper tail accurate when x is close to 1.
// No argument checking.
double incomplete_beta(double a, double b, double x, double xc);
double incomplete_beta_complement(double a, double b, double x, double xc);

// Solves cdf(x) = p for a continuous nondecreasing cdf on (0, inf) by
// geometric bracket expansion from `guess` followed by TOMS 748.
double invert_positive_cdf(const std::function<double(double)>& cdf, double p, double guess);

// Same on [0, 1].
double invert_unit_cdf(const std::function<double(double)>& cdf, double p);

}  // namespace precip::detail
