// Brute-force reference computations for tests. Nothing here calls into the
// library's special-function or root-finding code: CDFs are integrals of the
// densities written out from their formulas, quantiles come from bisection.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace precip::oracle {

inline double beta_density(double k, double r, double x) {
  // (1 - x)^{k-1} x^{r-1} / B(r, k)
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double log_norm = std::lgamma(k + r) - std::lgamma(k) - std::lgamma(r);
  return std::exp(log_norm + (k - 1.0) * std::log1p(-x) + (r - 1.0) * std::log(x));
}

inline double sf_density(double k, double r, double x) {
  if (x <= 0.0) return 0.0;
  const double log_norm = std::lgamma(k + r) - std::lgamma(k) - std::lgamma(r) + k * std::log(k / r);
  return std::exp(log_norm + (k - 1.0) * std::log(x) - (k + r) * std::log1p(k / r * x));
}

inline double gamma_density(double shape, double rate, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                  std::lgamma(shape));
}

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, 1e-15);
}

inline double integrate_to_infinity(const std::function<double(double)>& f, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, a, std::numeric_limits<double>::infinity(), 1e-15);
}

/// Lower-tail probability of a density supported on [0, upper], integrating
/// whichever side of x is smaller in mass.
struct Law {
  std::function<double(double)> density;
  double upper;  // +inf for unbounded support
  double median_guess;
  // Density at upper - t. Integrating it from 0 keeps a singularity at the
  // upper end resolved to full precision.
  std::function<double(double)> reflected = nullptr;

  double tail_above(double x) const {
    if (std::isinf(upper)) return integrate_to_infinity(density, x);
    if (reflected) return integrate(reflected, 0.0, upper - x);
    return integrate(density, x, upper);
  }
  double cdf(double x) const { return integrate(density, 0.0, x); }
};

/// Bisection on the integrated density. For p > 1/2 the upper tail is
/// matched instead, which keeps the result accurate in heavy tails.
inline double quantile(const Law& law, double p) {
  const bool upper_side = p > 0.5;
  const auto excess = [&](double x) {
    return upper_side ? (1.0 - p) - law.tail_above(x) : law.cdf(x) - p;
  };
  double lo = 0.0;
  double hi = std::isinf(law.upper) ? law.median_guess : law.upper;
  if (std::isinf(law.upper)) {
    while (excess(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int i = 0; i < 400 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline Law beta_law(double k, double r) {
  return Law{[k, r](double x) { return beta_density(k, r, x); }, 1.0, 0.5,
             [k, r](double t) { return beta_density(r, k, t); }};
}

inline Law sf_law(double k, double r) {
  return Law{[k, r](double x) { return sf_density(k, r, x); },
             std::numeric_limits<double>::infinity(), 1.0};
}

inline Law gamma_law(double shape, double rate) {
  return Law{[shape, rate](double x) { return gamma_density(shape, rate, x); },
             std::numeric_limits<double>::infinity(), shape / rate};
}

/// Negative binomial PMF by the product recursion P(n) = P(n-1) (n-1+r)(1-p)/n.
inline std::vector<double> negbin_pmf_table(double r, double p, std::size_t size) {
  std::vector<double> pmf(size);
  pmf[0] = std::pow(p, r);
  for (std::size_t n = 1; n < size; ++n) {
    pmf[n] = pmf[n - 1] * (static_cast<double>(n) - 1.0 + r) * (1.0 - p) / static_cast<double>(n);
  }
  return pmf;
}

/// Asymptotic 99% critical value of the one-sample KS statistic.
inline double ks_critical_99(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// Plain empirical KS distance, written independently of sup_discrepancy.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace precip::oracle
