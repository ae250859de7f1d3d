#include "precip/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "detail/special_detail.hpp"
#include "precip/errors.hpp"

namespace precip {
namespace {

constexpr int kMaxFractionTerms = 20000;
constexpr double kTiny = 1e-300;
constexpr double kFractionEps = 1e-16;

// Continued fraction part of I_x(a, b), valid (fast) for x < (a+1)/(a+b+2).
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
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
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kFractionEps) return h;
  }
  throw InternalError("incomplete beta continued fraction did not converge for a=" +
                      std::to_string(a) + " b=" + std::to_string(b) + " x=" + std::to_string(x));
}

// x^a (1-x)^b / (a B(a, b)) with both x and 1-x supplied exactly.
double beta_prefactor(double a, double b, double x, double xc) {
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(xc);
  return std::exp(log_front) / a;
}

}  // namespace

namespace detail {

double incomplete_beta(double a, double b, double x, double xc) {
  if (x <= 0.0) return 0.0;
  if (xc <= 0.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return beta_prefactor(a, b, x, xc) * beta_fraction(a, b, x);
  }
  return 1.0 - beta_prefactor(b, a, xc, x) * beta_fraction(b, a, xc);
}

double incomplete_beta_complement(double a, double b, double x, double xc) {
  if (x <= 0.0) return 1.0;
  if (xc <= 0.0) return 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return 1.0 - beta_prefactor(a, b, x, xc) * beta_fraction(a, b, x);
  }
  return beta_prefactor(b, a, xc, x) * beta_fraction(b, a, xc);
}

}  // namespace detail

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("incomplete beta: parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete beta: x must lie in [0, 1]");
  }
  return detail::incomplete_beta(a, b, x, 1.0 - x);
}

double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: shape must be positive");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

double regularized_upper_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: shape must be positive");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x);
}

}  // namespace precip
