#include "precip/distributions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "detail/special_detail.hpp"
#include "precip/errors.hpp"
#include "precip/special.hpp"

namespace precip {
namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void require_positive(double v, const char* what) {
  if (!positive_finite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite (got " +
                      std::to_string(v) + ")");
  }
}

void require_open_probability(double p, const char* where) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(where) + ": probability must lie in (0, 1) (got " +
                      std::to_string(p) + ")");
  }
}

void require_not_nan(double x, const char* where) {
  if (std::isnan(x)) throw DomainError(std::string(where) + ": argument is NaN");
}

constexpr int kBracketSteps = 2100;
constexpr std::uintmax_t kSolverIterations = 300;

double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                       double f_lo, double f_hi) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t iterations = kSolverIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  if (iterations >= kSolverIterations) {
    throw InternalError("quantile root finding did not converge");
  }
  return 0.5 * (a + b);
}

}  // namespace

namespace detail {

double invert_positive_cdf(const std::function<double(double)>& cdf, double p, double guess) {
  double lo = guess;
  double hi = guess;
  double f_hi = cdf(hi) - p;
  for (int i = 0; f_hi < 0.0; ++i) {
    if (i == kBracketSteps) throw InternalError("quantile upper bracket not found");
    lo = hi;
    hi *= 2.0;
    f_hi = cdf(hi) - p;
  }
  double f_lo = cdf(lo) - p;
  for (int i = 0; f_lo > 0.0; ++i) {
    if (i == kBracketSteps) throw InternalError("quantile lower bracket not found");
    hi = lo;
    f_hi = f_lo;
    lo *= 0.5;
    f_lo = cdf(lo) - p;
  }
  const auto f = [&](double x) { return cdf(x) - p; };
  return solve_bracketed(f, lo, hi, f_lo, f_hi);
}

double invert_unit_cdf(const std::function<double(double)>& cdf, double p) {
  const auto f = [&](double x) { return cdf(x) - p; };
  return solve_bracketed(f, 0.0, 1.0, -p, 1.0 - p);
}

}  // namespace detail

TemperedSFParams::TemperedSFParams(double r_, double lambda_, double gamma_)
    : r(r_), lambda(lambda_), gamma(gamma_) {
  require_positive(r, "tempered SF r");
  require_positive(lambda, "tempered SF lambda");
  require_positive(gamma, "tempered SF gamma");
}

GammaParams::GammaParams(double shape_, double rate_) : shape(shape_), rate(rate_) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
}

NegBinParams::NegBinParams(double r_, double p_) : r(r_), p(p_) {
  require_positive(r, "negative binomial r");
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("negative binomial p must lie in (0, 1) (got " + std::to_string(p) + ")");
  }
}

SFParams::SFParams(double k_, double r_) : k(k_), r(r_) {
  require_positive(k, "Snedecor-Fisher k");
  require_positive(r, "Snedecor-Fisher r");
}

BetaParams::BetaParams(double k_, double r_) : k(k_), r(r_) {
  require_positive(k, "beta k");
  require_positive(r, "beta r");
}

FrechetParams::FrechetParams(double mu_, double gamma_) : mu(mu_), gamma(gamma_) {
  require_positive(mu, "Frechet mu");
  require_positive(gamma, "Frechet gamma");
}

// --- beta ------------------------------------------------------------------

double beta_pdf(const BetaParams& params, double x) {
  require_not_nan(x, "beta_pdf");
  if (x < 0.0 || x > 1.0) return 0.0;
  const double log_norm =
      std::lgamma(params.k + params.r) - std::lgamma(params.k) - std::lgamma(params.r);
  return std::exp(log_norm + (params.k - 1.0) * std::log1p(-x) + (params.r - 1.0) * std::log(x));
}

double beta_cdf(const BetaParams& params, double x) {
  require_not_nan(x, "beta_cdf");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // (1-x)^{k-1} x^{r-1} is I_x(r, k) in conventional order.
  return detail::incomplete_beta(params.r, params.k, x, 1.0 - x);
}

double beta_quantile(const BetaParams& params, double p) {
  require_open_probability(p, "beta_quantile");
  return detail::invert_unit_cdf([&](double x) { return beta_cdf(params, x); }, p);
}

// --- Snedecor-Fisher ---------------------------------------------------------

double sf_pdf(const SFParams& params, double x) {
  require_not_nan(x, "sf_pdf");
  if (x < 0.0) return 0.0;
  const double k = params.k;
  const double r = params.r;
  const double log_norm = std::lgamma(k + r) - std::lgamma(k) - std::lgamma(r) + k * std::log(k / r);
  if (x == 0.0) {
    if (k < 1.0) return std::numeric_limits<double>::infinity();
    return k == 1.0 ? std::exp(log_norm) : 0.0;
  }
  return std::exp(log_norm + (k - 1.0) * std::log(x) - (k + r) * std::log1p(k / r * x));
}

double sf_cdf(const SFParams& params, double x) {
  require_not_nan(x, "sf_cdf");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  // Q_{k,r} <= x  <=>  k Q / (k Q + r) <= k x / (k x + r), a Beta(k, r) variable.
  const double kx = params.k * x;
  const double denom = kx + params.r;
  return detail::incomplete_beta(params.k, params.r, kx / denom, params.r / denom);
}

double sf_quantile(const SFParams& params, double p) {
  require_open_probability(p, "sf_quantile");
  return detail::invert_positive_cdf([&](double x) { return sf_cdf(params, x); }, p, 1.0);
}

// --- tempered Snedecor-Fisher ------------------------------------------------

double tempered_sf_cdf(const TemperedSFParams& params, double x) {
  require_not_nan(x, "tempered_sf_cdf");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double t = params.lambda * std::pow(x, params.gamma);
  // (t / (1 + t))^r = (1 + 1/t)^{-r}
  return std::exp(-params.r * std::log1p(1.0 / t));
}

double tempered_sf_pdf(const TemperedSFParams& params, double x) {
  require_not_nan(x, "tempered_sf_pdf");
  if (x <= 0.0 || std::isinf(x)) return 0.0;
  const double t = params.lambda * std::pow(x, params.gamma);
  const double cdf = std::exp(-params.r * std::log1p(1.0 / t));
  // dF/dx = r F / (t (1 + t)) * lambda gamma x^{gamma - 1} = r gamma F / (x (1 + t))
  return params.r * params.gamma * cdf / (x * (1.0 + t));
}

double tempered_sf_quantile(const TemperedSFParams& params, double p) {
  require_open_probability(p, "tempered_sf_quantile");
  const double log_u = std::log(p) / params.r;  // u = p^{1/r}
  const double u = std::exp(log_u);
  const double one_minus_u = -std::expm1(log_u);
  return std::pow(u / (params.lambda * one_minus_u), 1.0 / params.gamma);
}

// --- negative binomial -------------------------------------------------------

double negbin_pmf(const NegBinParams& params, std::int64_t n) {
  if (n < 0) throw DomainError("negbin_pmf: n must be nonnegative");
  const double nd = static_cast<double>(n);
  const double log_pmf = std::lgamma(nd + params.r) - std::lgamma(nd + 1.0) - std::lgamma(params.r) +
                         params.r * std::log(params.p) + nd * std::log1p(-params.p);
  return std::exp(log_pmf);
}

double negbin_cdf(const NegBinParams& params, std::int64_t n) {
  if (n < 0) return 0.0;
  // P(N <= n) = I_p(r, n + 1)
  return detail::incomplete_beta(params.r, static_cast<double>(n) + 1.0, params.p, 1.0 - params.p);
}

double negbin_mean(const NegBinParams& params) { return params.r * (1.0 - params.p) / params.p; }

// --- gamma / Frechet ---------------------------------------------------------

double gamma_pdf(const GammaParams& params, double x) {
  require_not_nan(x, "gamma_pdf");
  if (x < 0.0 || std::isinf(x)) return 0.0;
  if (x == 0.0) {
    if (params.shape < 1.0) return std::numeric_limits<double>::infinity();
    return params.shape == 1.0 ? params.rate : 0.0;
  }
  return std::exp(params.shape * std::log(params.rate) + (params.shape - 1.0) * std::log(x) -
                  params.rate * x - std::lgamma(params.shape));
}

double gamma_cdf(const GammaParams& params, double x) {
  require_not_nan(x, "gamma_cdf");
  if (x <= 0.0) return 0.0;
  return regularized_lower_gamma(params.shape, params.rate * x);
}

double gamma_quantile(const GammaParams& params, double p) {
  require_open_probability(p, "gamma_quantile");
  return detail::invert_positive_cdf([&](double x) { return gamma_cdf(params, x); }, p,
                                     params.shape / params.rate);
}

double frechet_cdf(const FrechetParams& params, double x) {
  require_not_nan(x, "frechet_cdf");
  if (x <= 0.0) return 0.0;
  return std::exp(-params.mu * std::pow(x, -params.gamma));
}

// --- sampling ----------------------------------------------------------------

double draw_gamma(const GammaParams& params, Rng& rng) {
  return std::gamma_distribution<double>(params.shape, 1.0 / params.rate)(rng);
}

std::int64_t draw_negbin(const NegBinParams& params, Rng& rng) {
  // Gamma-Poisson mixture: N | L ~ Poisson(L), L ~ Gamma(r, scale (1 - p) / p).
  const double intensity =
      std::gamma_distribution<double>(params.r, (1.0 - params.p) / params.p)(rng);
  if (!(intensity > 0.0)) return 0;
  return std::poisson_distribution<std::int64_t>(intensity)(rng);
}

double draw_tempered_sf(const TemperedSFParams& params, Rng& rng) {
  return tempered_sf_quantile(params, open_unit(rng));
}

std::vector<double> sample_gamma(const GammaParams& params, std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::vector<double> out(n);
  std::gamma_distribution<double> dist(params.shape, 1.0 / params.rate);
  for (auto& v : out) v = dist(rng);
  return out;
}

std::vector<std::int64_t> sample_negbin(const NegBinParams& params, std::size_t n,
                                        std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = draw_negbin(params, rng);
  return out;
}

std::vector<double> sample_tempered_sf(const TemperedSFParams& params, std::size_t n,
                                       std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::vector<double> out(n);
  for (auto& v : out) v = draw_tempered_sf(params, rng);
  return out;
}

}  // namespace precip
