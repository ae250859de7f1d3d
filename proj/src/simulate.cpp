#include "precip/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail/parallel.hpp"
#include "precip/errors.hpp"
#include "precip/fitting.hpp"

namespace precip {

DailyLaw DailyLaw::constant_law(double a) {
  DailyLaw law;
  law.kind = Kind::constant;
  law.mean = a;
  return law;
}

DailyLaw DailyLaw::exponential(double a) { return gamma_law(a, 1.0); }

DailyLaw DailyLaw::gamma_law(double a, double shape) {
  DailyLaw law;
  law.kind = Kind::gamma;
  law.mean = a;
  law.shape = shape;
  return law;
}

DailyLaw DailyLaw::pareto(double a, double tail_index) {
  DailyLaw law;
  law.kind = Kind::pareto;
  law.mean = a;
  law.tail_index = tail_index;
  return law;
}

DailyLaw DailyLaw::autocorrelated(double a, double rho) {
  DailyLaw law;
  law.kind = Kind::autocorrelated;
  law.mean = a;
  law.correlation = rho;
  return law;
}

void DailyLaw::validate() const {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw ConfigError("daily mean must be positive");
  switch (kind) {
    case Kind::gamma:
      if (!(shape > 0.0)) throw ConfigError("daily gamma shape must be positive");
      break;
    case Kind::pareto:
      // Condition (finite mean) fails for tail index <= 1.
      if (!(tail_index > 1.0)) throw ConfigError("Pareto tail index must exceed 1 (finite mean)");
      break;
    case Kind::autocorrelated:
      if (!(correlation >= 0.0 && correlation < 1.0)) {
        throw ConfigError("autocorrelation must lie in [0, 1)");
      }
      break;
    case Kind::constant:
      break;
  }
}

std::string to_string(DailyLaw::Kind kind) {
  switch (kind) {
    case DailyLaw::Kind::constant: return "constant";
    case DailyLaw::Kind::gamma: return "gamma";
    case DailyLaw::Kind::pareto: return "pareto";
    case DailyLaw::Kind::autocorrelated: return "autocorrelated";
  }
  return "unknown";
}

DailyLaw::Kind parse_daily_law(std::string_view text) {
  if (text == "constant") return DailyLaw::Kind::constant;
  if (text == "gamma" || text == "exponential") return DailyLaw::Kind::gamma;
  if (text == "pareto") return DailyLaw::Kind::pareto;
  if (text == "autocorrelated") return DailyLaw::Kind::autocorrelated;
  throw ConfigError("unknown daily law '" + std::string(text) + "'");
}

double draw_daily_sum(const DailyLaw& law, std::int64_t count, Rng& rng) {
  if (count <= 0) return 0.0;
  const double n = static_cast<double>(count);
  switch (law.kind) {
    case DailyLaw::Kind::constant:
      return law.mean * n;
    case DailyLaw::Kind::gamma:
      // A sum of i.i.d. gamma variables with a common rate is gamma.
      return std::gamma_distribution<double>(law.shape * n, law.mean / law.shape)(rng);
    case DailyLaw::Kind::pareto: {
      // Lomax: X = s (U^{-1/alpha} - 1), mean s / (alpha - 1).
      const double scale = law.mean * (law.tail_index - 1.0);
      double sum = 0.0;
      for (std::int64_t j = 0; j < count; ++j) {
        sum += scale * std::expm1(-std::log(open_unit(rng)) / law.tail_index);
      }
      return sum;
    }
    case DailyLaw::Kind::autocorrelated: {
      std::exponential_distribution<double> innovation(1.0 / law.mean);
      double x = innovation(rng);
      double sum = x;
      for (std::int64_t j = 1; j < count; ++j) {
        x = law.correlation * x + (1.0 - law.correlation) * innovation(rng);
        sum += x;
      }
      return sum;
    }
  }
  return 0.0;
}

std::vector<LlnPoint> verify_lln_negbin_sums(double r, double mu, double q, const DailyLaw& law,
                                             std::span<const std::int64_t> n_grid,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned threads) {
  law.validate();
  if (!(r > 0.0) || !(mu > 0.0)) throw ConfigError("r and mu must be positive");
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0, 1)");
  if (trials == 0) throw ConfigError("trials must be positive");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw ConfigError("n grid must be positive and strictly increasing");
    }
  }

  const GammaParams limit(r, mu / law.mean);
  std::vector<LlnPoint> out;
  for (const std::int64_t n : n_grid) {
    const double p = std::min(q, mu / static_cast<double>(n));
    const NegBinParams count_law(r, p);
    std::vector<double> values(trials);
    // The same streams are reused for every n (common random numbers).
    detail::for_each_block(trials, kTrialBlock, threads,
                           [&](std::size_t block, std::size_t first, std::size_t last) {
                             Rng rng = make_stream(seed, block);
                             for (std::size_t t = first; t < last; ++t) {
                               const std::int64_t count = draw_negbin(count_law, rng);
                               values[t] = draw_daily_sum(law, count, rng) / static_cast<double>(n);
                             }
                           });
    const double ks = sup_discrepancy(values, [&](double x) { return gamma_cdf(limit, x); });
    out.push_back(LlnPoint{n, p, ks});
  }
  return out;
}

double verify_max_daily_law(const TemperedSFParams& params, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ConfigError("trials must be positive");
  const auto sample = sample_tempered_sf(params, trials, seed);
  return sup_discrepancy(sample, [&](double x) { return tempered_sf_cdf(params, x); });
}

std::vector<FrechetPoint> verify_frechet_limit(double r1, double c, double gamma,
                                               std::span<const std::int64_t> m_grid,
                                               std::size_t grid_points) {
  if (!(r1 > 0.0) || !(c > 0.0) || !(gamma > 0.0)) {
    throw ConfigError("r1, c and gamma must be positive");
  }
  if (grid_points < 2) throw ConfigError("x grid needs at least two points");
  // (1 - 1/(1 + c m x^g))^{m r1} -> exp(-(r1 / c) x^{-g}).
  const double mu = r1 / c;
  const FrechetParams limit(mu, gamma);
  // Log-spaced grid over six decades either side of the Frechet scale.
  const double centre = std::log(std::pow(mu, 1.0 / gamma));
  const double half_width = 6.0 * std::log(10.0);
  std::vector<FrechetPoint> out;
  for (std::size_t k = 0; k < m_grid.size(); ++k) {
    const std::int64_t m = m_grid[k];
    if (m < 1 || (k > 0 && m <= m_grid[k - 1])) {
      throw ConfigError("m grid must be positive and strictly increasing");
    }
    const double md = static_cast<double>(m);
    const TemperedSFParams pre_limit(md * r1, c * md, gamma);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
      const double t = -half_width + 2.0 * half_width * static_cast<double>(i) /
                                         static_cast<double>(grid_points - 1);
      const double x = std::exp(centre + t);
      worst = std::max(worst, std::fabs(tempered_sf_cdf(pre_limit, x) - frechet_cdf(limit, x)));
    }
    out.push_back(FrechetPoint{m, worst});
  }
  return out;
}

std::vector<double> null_statistics(Statistic statistic, std::size_t m, std::size_t l, double r,
                                    std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (m < 2) throw ConfigError("window width must be at least 2");
  if (!(r > 0.0)) throw ConfigError("r must be positive");
  if (statistic == Statistic::sr0_group && (l < 1 || l >= m)) {
    throw ConfigError("group size must satisfy 1 <= l < m");
  }
  if (statistic == Statistic::daily_max) throw ConfigError("daily_max is not a window statistic");
  std::vector<std::size_t> subset(statistic == Statistic::sr0_group ? l : 1);
  std::iota(subset.begin(), subset.end(), std::size_t{0});

  std::vector<double> values(trials);
  detail::for_each_block(trials, kTrialBlock, threads,
                         [&](std::size_t block, std::size_t first, std::size_t last) {
                           Rng rng = make_stream(seed, block);
                           std::gamma_distribution<double> draw(r, 1.0);
                           std::vector<double> window(m);
                           for (std::size_t t = first; t < last; ++t) {
                             for (auto& v : window) v = draw(rng);
                             switch (statistic) {
                               case Statistic::sr: values[t] = sr_statistic(window, 0); break;
                               case Statistic::sr0: values[t] = sr0_statistic(window, 0); break;
                               default: values[t] = sr0_group_statistic(window, subset); break;
                             }
                           }
                         });
  return values;
}

Calibration calibrate_test(Statistic statistic, std::size_t m, std::size_t l, double r,
                           double epsilon, std::size_t trials, std::uint64_t seed,
                           unsigned threads) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (trials == 0) throw ConfigError("trials must be positive");
  const auto values = null_statistics(statistic, m, l, r, trials, seed, threads);
  Calibration cal;
  switch (statistic) {
    case Statistic::sr: cal.threshold = sr_threshold(m, r, epsilon); break;
    case Statistic::sr0: cal.threshold = sr0_threshold(m, r, epsilon); break;
    default: cal.threshold = sr0_group_threshold(m, l, r, epsilon); break;
  }
  cal.trials = trials;
  cal.rejections = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v > cal.threshold; }));
  cal.rate = static_cast<double>(cal.rejections) / static_cast<double>(trials);
  cal.standard_error = std::sqrt(epsilon * (1.0 - epsilon) / static_cast<double>(trials));
  return cal;
}

DailySeries synthetic_series(const SyntheticSeriesSpec& spec, std::uint64_t seed) {
  if (!(spec.mean_dry_gap >= 1.0)) throw ConfigError("mean dry gap must be at least one day");
  Rng rng = make_stream(seed, 0);
  // Dry run length 1 + Geometric on {0, 1, ...} with mean mean_dry_gap - 1.
  std::geometric_distribution<int> extra_dry(1.0 / spec.mean_dry_gap);
  std::gamma_distribution<double> daily(spec.dailies.shape, 1.0 / spec.dailies.rate);
  DailySeries series;
  series.station = "synthetic";
  Date day = spec.start;
  for (std::size_t i = 0; i < spec.periods; ++i) {
    const std::int64_t wet = 1 + draw_negbin(spec.durations, rng);
    for (std::int64_t j = 0; j < wet; ++j) {
      double v = daily(rng);
      while (!(v > 0.0)) v = daily(rng);
      series.records.push_back(DailyRecord{day, v});
      day += std::chrono::days{1};
    }
    const int dry = 1 + extra_dry(rng);
    for (int j = 0; j < dry; ++j) {
      series.records.push_back(DailyRecord{day, 0.0});
      day += std::chrono::days{1};
    }
  }
  return series;
}

}  // namespace precip
