#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "precip/anomaly_tests.hpp"
#include "precip/distributions.hpp"
#include "precip/random.hpp"
#include "precip/segmentation.hpp"

namespace precip {

/// Trials are generated in fixed-size blocks; block b always draws from
/// make_stream(seed, b), so results do not depend on the thread count.
inline constexpr std::size_t kTrialBlock = 4096;

/// Law of the daily volumes X_j summed in a negative binomial random sum.
struct DailyLaw {
  enum class Kind { constant, gamma, pareto, autocorrelated };
  Kind kind = Kind::gamma;
  double mean = 1.0;         // a
  double shape = 1.0;        // gamma shape (1 = exponential)
  double tail_index = 3.0;   // Pareto (Lomax) tail index, must exceed 1
  double correlation = 0.5;  // autocorrelated: X_j = rho X_{j-1} + (1 - rho) E_j

  static DailyLaw constant_law(double a);
  static DailyLaw exponential(double a);
  static DailyLaw gamma_law(double a, double shape);
  static DailyLaw pareto(double a, double tail_index);
  static DailyLaw autocorrelated(double a, double rho);

  void validate() const;
};

std::string to_string(DailyLaw::Kind kind);
DailyLaw::Kind parse_daily_law(std::string_view text);

/// Sum of `count` consecutive daily volumes.
double draw_daily_sum(const DailyLaw& law, std::int64_t count, Rng& rng);

struct LlnPoint {
  std::int64_t n = 0;
  double p = 0.0;
  double ks = 0.0;
};

/// For each n, simulates n^{-1} S_N with N ~ NegBin(r, min(q, mu / n)) and
/// reports the KS distance to the gamma limit with shape r and rate mu / a.
std::vector<LlnPoint> verify_lln_negbin_sums(double r, double mu, double q, const DailyLaw& law,
                                             std::span<const std::int64_t> n_grid,
                                             std::size_t trials, std::uint64_t seed,
                                             unsigned threads = 1);

/// KS distance between `trials` sampler draws and the tempered SF CDF.
double verify_max_daily_law(const TemperedSFParams& params, std::size_t trials, std::uint64_t seed);

struct FrechetPoint {
  std::int64_t m = 0;
  double distance = 0.0;
};

/// sup over an x-grid of |F(x; m r1, c m, gamma) - exp(-(r1 / c) x^{-gamma})|.
std::vector<FrechetPoint> verify_frechet_limit(double r1, double c, double gamma,
                                               std::span<const std::int64_t> m_grid,
                                               std::size_t grid_points = 20001);

/// Values of a total-volume statistic on homogeneous gamma(r, 1) windows of
/// width m. The statistic targets coordinate 0 (indices 0..l-1 for the group
/// statistic).
std::vector<double> null_statistics(Statistic statistic, std::size_t m, std::size_t l, double r,
                                    std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct Calibration {
  std::size_t trials = 0;
  std::size_t rejections = 0;
  double rate = 0.0;
  double standard_error = 0.0;  // binomial SE at the nominal epsilon
  double threshold = 0.0;
};

/// Empirical type-I error of a total-volume test on homogeneous windows.
Calibration calibrate_test(Statistic statistic, std::size_t m, std::size_t l, double r,
                           double epsilon, std::size_t trials, std::uint64_t seed,
                           unsigned threads = 1);

/// A synthetic daily series: wet runs of 1 + NegBin(r, p) days with gamma
/// daily volumes, separated by dry runs of 1 + Geometric days with the given mean.
struct SyntheticSeriesSpec {
  NegBinParams durations{0.85, 0.3};
  GammaParams dailies{0.8, 0.15};
  double mean_dry_gap = 3.0;  // at least 1
  std::size_t periods = 1000;
  Date start = Date{std::chrono::year{1950} / 1 / 1};
};

DailySeries synthetic_series(const SyntheticSeriesSpec& spec, std::uint64_t seed);

}  // namespace precip
