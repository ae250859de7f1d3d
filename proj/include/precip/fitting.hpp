#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "precip/distributions.hpp"
#include "precip/segmentation.hpp"

namespace precip {

enum class FitModel { negbin, tempered_sf_quantile, tempered_sf_ls, gamma_totals };

std::string to_string(FitModel model);
FitModel parse_fit_model(std::string_view text);

using QuantileOrders = std::array<double, 3>;
inline constexpr QuantileOrders kDefaultQuantileOrders{0.25, 0.5, 0.75};

/// Durations are fitted as counts n = duration - 1, since every wet period has
/// at least one day while the negative binomial support starts at 0.
inline constexpr int kNegBinDurationShift = 1;

struct NegBinFit {
  NegBinParams params;
  bool moments_fallback = false;
  int iterations = 0;
};

struct GammaFit {
  GammaParams params;
  bool moments_fallback = false;
  int iterations = 0;
};

/// One row of a fit: what was fitted, on how much data, and how well.
struct FitReport {
  FitModel model;
  std::variant<NegBinParams, TemperedSFParams, GammaParams> params;
  int censor_min_duration = 1;
  std::size_t sample_size = 0;
  double discrepancy = 0.0;
  std::optional<QuantileOrders> quantile_orders;
  bool moments_fallback = false;
  int duration_shift = 0;
};

/// Maxima of the periods lasting at least `min_duration` days, in input order.
std::vector<double> censor_and_collect_maxima(std::span<const WetPeriod> periods, int min_duration);

struct NegBinFitOptions {
  std::size_t min_sample = 30;
  int max_iterations = 200;
};

/// Maximum-likelihood negative binomial fit of wet-period durations (shifted
/// by kNegBinDurationShift). Throws EstimatorError when the sample is too
/// small or shows no overdispersion (the likelihood then has no finite
/// maximizer in r).
NegBinFit fit_negbin(std::span<const int> durations, const NegBinFitOptions& options = {});

/// Same, for counts already on the 0-based support.
NegBinFit fit_negbin_counts(std::span<const std::int64_t> counts,
                            const NegBinFitOptions& options = {});

/// Order-statistic index [m p] (integer part), clamped to [1, m]; 1-based.
std::size_t order_statistic_index(std::size_t m, double p);

/// Three-quantile estimator of (gamma, lambda) for a known r.
TemperedSFParams fit_tempered_sf_quantile(std::span<const double> maxima, double r,
                                          const QuantileOrders& orders = kDefaultQuantileOrders);

/// Least-squares estimator of (gamma, lambda) for a known r, regressing
/// log(i^{1/r} / (m^{1/r} - i^{1/r})) on log X_(i) for i = 1..m-1.
TemperedSFParams fit_tempered_sf_ls(std::span<const double> maxima, double r);

struct GammaFitOptions {
  std::size_t min_sample = 30;
  int max_iterations = 100;
};

/// Maximum-likelihood gamma fit of per-period totals (Newton on the shape
/// from a method-of-moments start).
GammaFit fit_gamma_totals(std::span<const double> totals, const GammaFitOptions& options = {});

/// Kolmogorov-Smirnov distance between the empirical CDF of `sample` and a
/// continuous `cdf`, taking both one-sided limits at every jump.
double sup_discrepancy(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Same for an integer-valued sample against a discrete CDF evaluated at
/// integers.
double sup_discrepancy_discrete(std::span<const std::int64_t> sample,
                                const std::function<double(std::int64_t)>& cdf);

/// Options shared by the report builders.
struct FitRequest {
  FitModel model = FitModel::tempered_sf_ls;
  int min_duration = 1;
  QuantileOrders orders = kDefaultQuantileOrders;
  std::optional<double> r;  // tempered SF shape; fitted from durations when absent
};

/// Runs a full fit on a period list and fills in its FitReport.
FitReport fit_periods(std::span<const WetPeriod> periods, const FitRequest& request);

/// One censoring threshold of the two-estimator comparison table.
struct CensoringRow {
  int min_duration = 1;
  std::size_t sample_size = 0;
  std::optional<double> discrepancy_quantile;
  std::optional<double> discrepancy_ls;
  std::optional<TemperedSFParams> quantile;
  std::optional<TemperedSFParams> ls;
  std::string note;  // estimator failure message, if any
};

inline const std::vector<int> kDefaultCensoringThresholds{1, 2, 3, 4, 6, 8, 10, 15};

std::vector<CensoringRow> censoring_table(std::span<const WetPeriod> periods, double r,
                                          std::span<const int> thresholds,
                                          const QuantileOrders& orders = kDefaultQuantileOrders);

}  // namespace precip
