#include "precip/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "precip/errors.hpp"

namespace precip {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // divisor n
};

template <typename T>
Moments moments(std::span<const T> values) {
  Moments mo;
  const auto n = static_cast<double>(values.size());
  for (const auto v : values) mo.mean += static_cast<double>(v);
  mo.mean /= n;
  for (const auto v : values) {
    const double d = static_cast<double>(v) - mo.mean;
    mo.variance += d * d;
  }
  mo.variance /= n;
  return mo;
}

std::vector<double> sorted_positive(std::span<const double> values, const char* what) {
  std::vector<double> out(values.begin(), values.end());
  for (const double v : out) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(std::string(what) + " must be positive and finite");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_orders(const QuantileOrders& orders) {
  const auto [p1, p2, p3] = orders;
  if (!(0.0 < p1 && p1 < p2 && p2 < p3 && p3 < 1.0)) {
    throw ConfigError("quantile orders must satisfy 0 < p1 < p2 < p3 < 1");
  }
}

// log(1 - p^{1/r}) without cancellation for p^{1/r} near 1.
double log_one_minus_root(double p, double r) { return std::log(-std::expm1(std::log(p) / r)); }

}  // namespace

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::negbin: return "negbin";
    case FitModel::tempered_sf_quantile: return "tempered_sf_quantile";
    case FitModel::tempered_sf_ls: return "tempered_sf_ls";
    case FitModel::gamma_totals: return "gamma_totals";
  }
  return "unknown";
}

FitModel parse_fit_model(std::string_view text) {
  if (text == "negbin") return FitModel::negbin;
  if (text == "tsf-quantile" || text == "tempered_sf_quantile") return FitModel::tempered_sf_quantile;
  if (text == "tsf-ls" || text == "tempered_sf_ls") return FitModel::tempered_sf_ls;
  if (text == "gamma-totals" || text == "gamma_totals") return FitModel::gamma_totals;
  throw ConfigError("unknown model '" + std::string(text) + "'");
}

std::vector<double> censor_and_collect_maxima(std::span<const WetPeriod> periods, int min_duration) {
  if (min_duration < 1) throw ConfigError("minimum duration must be at least 1");
  std::vector<double> maxima;
  for (const auto& p : periods) {
    if (p.duration >= min_duration) maxima.push_back(p.max_daily);
  }
  return maxima;
}

// --- negative binomial -------------------------------------------------------

NegBinFit fit_negbin_counts(std::span<const std::int64_t> counts, const NegBinFitOptions& options) {
  if (counts.size() < options.min_sample || counts.empty()) {
    throw InputError("negative binomial fit needs at least " + std::to_string(options.min_sample) +
                     " observations (got " + std::to_string(counts.size()) + ")");
  }
  for (const auto c : counts) {
    if (c < 0) throw InputError("negative binomial counts must be nonnegative");
  }
  const Moments mo = moments(counts);
  if (!(mo.variance > mo.mean) || mo.mean <= 0.0) {
    throw EstimatorError("negative binomial fit: sample shows no overdispersion (mean " +
                         std::to_string(mo.mean) + ", variance " + std::to_string(mo.variance) +
                         "); the likelihood has no finite maximizer in r");
  }

  // exceed[j] = #{i : x_i > j}; the digamma differences reduce to sums of 1/(r + j).
  const auto max_count = *std::max_element(counts.begin(), counts.end());
  std::vector<double> exceed(static_cast<std::size_t>(max_count), 0.0);
  for (const auto c : counts) {
    for (std::int64_t j = 0; j < c; ++j) exceed[static_cast<std::size_t>(j)] += 1.0;
  }
  const auto n = static_cast<double>(counts.size());
  const double mean = mo.mean;
  const auto score = [&](double r) {
    double s = 0.0;
    for (std::size_t j = 0; j < exceed.size(); ++j) s += exceed[j] / (r + static_cast<double>(j));
    return s - n * std::log1p(mean / r);
  };

  const double r_moments = mean * mean / (mo.variance - mean);
  double lo = r_moments;
  double hi = r_moments;
  double s_lo = score(lo);
  double s_hi = s_lo;
  int steps = 0;
  while (s_lo <= 0.0 && steps < 200) {
    hi = lo;
    s_hi = s_lo;
    lo *= 0.5;
    s_lo = score(lo);
    ++steps;
  }
  while (s_hi >= 0.0 && steps < 400) {
    lo = hi;
    s_lo = s_hi;
    hi *= 2.0;
    s_hi = score(hi);
    ++steps;
  }
  if (!(s_lo > 0.0 && s_hi < 0.0)) {
    return NegBinFit{NegBinParams(r_moments, r_moments / (r_moments + mean)), true, steps};
  }
  std::uintmax_t iterations = static_cast<std::uintmax_t>(options.max_iterations);
  const auto [a, b] = boost::math::tools::toms748_solve(
      score, lo, hi, s_lo, s_hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  if (iterations >= static_cast<std::uintmax_t>(options.max_iterations)) {
    throw EstimatorError("negative binomial fit: likelihood equation did not converge after " +
                         std::to_string(iterations) + " iterations (bracket [" + std::to_string(a) +
                         ", " + std::to_string(b) + "])");
  }
  const double r = 0.5 * (a + b);
  return NegBinFit{NegBinParams(r, r / (r + mean)), false,
                   steps + static_cast<int>(iterations)};
}

NegBinFit fit_negbin(std::span<const int> durations, const NegBinFitOptions& options) {
  std::vector<std::int64_t> counts;
  counts.reserve(durations.size());
  for (const int d : durations) {
    if (d < kNegBinDurationShift) throw InputError("wet-period durations must be at least 1 day");
    counts.push_back(d - kNegBinDurationShift);
  }
  return fit_negbin_counts(counts, options);
}

// --- tempered Snedecor-Fisher ------------------------------------------------

std::size_t order_statistic_index(std::size_t m, double p) {
  const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(m) * p));
  return std::clamp<std::size_t>(idx, 1, m);
}

TemperedSFParams fit_tempered_sf_quantile(std::span<const double> maxima, double r,
                                          const QuantileOrders& orders) {
  if (!(r > 0.0)) throw DomainError("tempered SF fit: r must be positive");
  check_orders(orders);
  if (maxima.size() < 3) throw EstimatorError("quantile estimator needs at least 3 maxima");
  const auto sorted = sorted_positive(maxima, "maxima");
  const std::size_t m = sorted.size();
  const auto [p1, p2, p3] = orders;
  const double x1 = sorted[order_statistic_index(m, p1) - 1];
  const double x2 = sorted[order_statistic_index(m, p2) - 1];
  const double x3 = sorted[order_statistic_index(m, p3) - 1];
  if (x1 == x3) {
    throw EstimatorError("quantile estimator: order statistics at p1 and p3 coincide");
  }
  const double numerator = (std::log(p1) - std::log(p3)) / r + log_one_minus_root(p3, r) -
                           log_one_minus_root(p1, r);
  const double gamma = numerator / (std::log(x1) - std::log(x3));
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw EstimatorError("quantile estimator produced nonpositive gamma " + std::to_string(gamma));
  }
  const double root2 = std::exp(std::log(p2) / r);
  const double lambda = root2 / (-std::expm1(std::log(p2) / r) * std::pow(x2, gamma));
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw EstimatorError("quantile estimator produced invalid lambda " + std::to_string(lambda));
  }
  return TemperedSFParams(r, lambda, gamma);
}

TemperedSFParams fit_tempered_sf_ls(std::span<const double> maxima, double r) {
  if (!(r > 0.0)) throw DomainError("tempered SF fit: r must be positive");
  if (maxima.size() < 3) throw EstimatorError("least-squares estimator needs at least 3 maxima");
  const auto sorted = sorted_positive(maxima, "maxima");
  const std::size_t m = sorted.size();
  const std::size_t count = m - 1;

  std::vector<double> z(count);
  std::vector<double> logx(count);
  const auto md = static_cast<double>(m);
  for (std::size_t i = 1; i <= count; ++i) {
    const double log_u = std::log(static_cast<double>(i) / md) / r;  // log (i/m)^{1/r}
    z[i - 1] = log_u - std::log(-std::expm1(log_u));
    logx[i - 1] = std::log(sorted[i - 1]);
  }
  const double cd = static_cast<double>(count);
  const double z_mean = std::accumulate(z.begin(), z.end(), 0.0) / cd;
  const double x_mean = std::accumulate(logx.begin(), logx.end(), 0.0) / cd;
  double sxz = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = logx[i] - x_mean;
    sxz += dx * (z[i] - z_mean);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw EstimatorError("least-squares estimator: maxima have zero variance");
  const double gamma = sxz / sxx;
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw EstimatorError("least-squares estimator produced nonpositive gamma " +
                         std::to_string(gamma));
  }
  const double lambda = std::exp(z_mean - gamma * x_mean);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw EstimatorError("least-squares estimator produced invalid lambda " +
                         std::to_string(lambda));
  }
  return TemperedSFParams(r, lambda, gamma);
}

// --- gamma -------------------------------------------------------------------

GammaFit fit_gamma_totals(std::span<const double> totals, const GammaFitOptions& options) {
  if (totals.size() < options.min_sample || totals.empty()) {
    throw InputError("gamma fit needs at least " + std::to_string(options.min_sample) +
                     " totals (got " + std::to_string(totals.size()) + ")");
  }
  double log_sum = 0.0;
  for (const double v : totals) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("gamma fit: totals must be positive");
    log_sum += std::log(v);
  }
  const Moments mo = moments(totals);
  const double s = std::log(mo.mean) - log_sum / static_cast<double>(totals.size());
  if (!(s > 0.0) || !(mo.variance > 0.0)) {
    throw EstimatorError("gamma fit: all totals are equal");
  }
  const double shape_moments = mo.mean * mo.mean / mo.variance;

  // Solve log k - digamma(k) = s.
  double k = shape_moments;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double f = std::log(k) - boost::math::digamma(k) - s;
    const double df = 1.0 / k - boost::math::trigamma(k);
    double next = k - f / df;
    if (!(next > 0.0) || !std::isfinite(next)) next = 0.5 * k;
    const bool done = std::fabs(next - k) <= 1e-14 * k;
    k = next;
    if (done) return GammaFit{GammaParams(k, k / mo.mean), false, it};
  }
  return GammaFit{GammaParams(shape_moments, shape_moments / mo.mean), true, options.max_iterations};
}

// --- discrepancy ---------------------------------------------------------------

double sup_discrepancy(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InputError("discrepancy of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j + 1) / n;
    worst = std::max({worst, std::fabs(at - f), std::fabs(f - below)});
    i = j + 1;
  }
  return worst;
}

double sup_discrepancy_discrete(std::span<const std::int64_t> sample,
                                const std::function<double(std::int64_t)>& cdf) {
  if (sample.empty()) throw InputError("discrepancy of an empty sample");
  std::vector<std::int64_t> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double worst = cdf(sorted.front() - 1);  // empirical CDF is 0 below the minimum
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double ecdf = static_cast<double>(j + 1) / n;
    worst = std::max(worst, std::fabs(ecdf - cdf(sorted[i])));
    // The empirical CDF stays flat up to the next observed value.
    const std::int64_t last_flat = (j + 1 < sorted.size()) ? sorted[j + 1] - 1 : sorted[i];
    if (last_flat > sorted[i]) worst = std::max(worst, std::fabs(ecdf - cdf(last_flat)));
    i = j + 1;
  }
  return worst;
}

// --- reports -------------------------------------------------------------------

namespace {

double resolve_r(std::span<const WetPeriod> periods, const FitRequest& request) {
  if (request.r) return *request.r;
  std::vector<int> durations;
  durations.reserve(periods.size());
  for (const auto& p : periods) durations.push_back(p.duration);
  return fit_negbin(durations).params.r;
}

}  // namespace

FitReport fit_periods(std::span<const WetPeriod> periods, const FitRequest& request) {
  switch (request.model) {
    case FitModel::negbin: {
      std::vector<std::int64_t> counts;
      counts.reserve(periods.size());
      for (const auto& p : periods) {
        if (p.duration >= request.min_duration) counts.push_back(p.duration - kNegBinDurationShift);
      }
      const NegBinFit fit = fit_negbin_counts(counts);
      const double disc = sup_discrepancy_discrete(
          counts, [&](std::int64_t v) { return negbin_cdf(fit.params, v); });
      return FitReport{FitModel::negbin, fit.params,  request.min_duration, counts.size(), disc,
                       std::nullopt,     fit.moments_fallback, kNegBinDurationShift};
    }
    case FitModel::tempered_sf_quantile:
    case FitModel::tempered_sf_ls: {
      const double r = resolve_r(periods, request);
      const auto maxima = censor_and_collect_maxima(periods, request.min_duration);
      const bool quantile = request.model == FitModel::tempered_sf_quantile;
      const TemperedSFParams params = quantile ? fit_tempered_sf_quantile(maxima, r, request.orders)
                                               : fit_tempered_sf_ls(maxima, r);
      const double disc =
          sup_discrepancy(maxima, [&](double x) { return tempered_sf_cdf(params, x); });
      return FitReport{request.model,
                       params,
                       request.min_duration,
                       maxima.size(),
                       disc,
                       quantile ? std::optional<QuantileOrders>(request.orders) : std::nullopt,
                       false,
                       request.r ? 0 : kNegBinDurationShift};
    }
    case FitModel::gamma_totals: {
      std::vector<double> totals;
      for (const auto& p : periods) {
        if (p.duration >= request.min_duration) totals.push_back(p.total);
      }
      const GammaFit fit = fit_gamma_totals(totals);
      const double disc = sup_discrepancy(totals, [&](double x) { return gamma_cdf(fit.params, x); });
      return FitReport{FitModel::gamma_totals, fit.params, request.min_duration, totals.size(),
                       disc, std::nullopt, fit.moments_fallback, 0};
    }
  }
  throw ConfigError("unknown model");
}

std::vector<CensoringRow> censoring_table(std::span<const WetPeriod> periods, double r,
                                          std::span<const int> thresholds,
                                          const QuantileOrders& orders) {
  std::vector<CensoringRow> rows;
  for (const int threshold : thresholds) {
    CensoringRow row;
    row.min_duration = threshold;
    const auto maxima = censor_and_collect_maxima(periods, threshold);
    row.sample_size = maxima.size();
    try {
      row.quantile = fit_tempered_sf_quantile(maxima, r, orders);
      row.discrepancy_quantile =
          sup_discrepancy(maxima, [&](double x) { return tempered_sf_cdf(*row.quantile, x); });
    } catch (const EstimatorError& e) {
      row.note += std::string("quantile: ") + e.what();
    }
    try {
      row.ls = fit_tempered_sf_ls(maxima, r);
      row.discrepancy_ls =
          sup_discrepancy(maxima, [&](double x) { return tempered_sf_cdf(*row.ls, x); });
    } catch (const EstimatorError& e) {
      if (!row.note.empty()) row.note += "; ";
      row.note += std::string("ls: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace precip
