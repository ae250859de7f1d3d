#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "precip/errors.hpp"
#include "precip/fitting.hpp"
#include "precip/simulate.hpp"
#include "support/oracles.hpp"

using namespace precip;

TEST_CASE("daily laws validate") {
  CHECK_THROWS_AS(DailyLaw::pareto(1.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(DailyLaw::pareto(1.0, 0.5).validate(), ConfigError);
  CHECK_NOTHROW(DailyLaw::pareto(1.0, 1.5).validate());
  CHECK_THROWS_AS(DailyLaw::autocorrelated(1.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(DailyLaw::exponential(0.0).validate(), ConfigError);
  CHECK(parse_daily_law(to_string(DailyLaw::Kind::pareto)) == DailyLaw::Kind::pareto);
  CHECK_THROWS_AS(parse_daily_law("lognormal"), ConfigError);
}

TEST_CASE("daily sums have mean count times a") {
  const std::vector<DailyLaw> laws{DailyLaw::constant_law(2.0), DailyLaw::exponential(2.0),
                                   DailyLaw::gamma_law(2.0, 0.4), DailyLaw::pareto(2.0, 3.5),
                                   DailyLaw::autocorrelated(2.0, 0.6)};
  for (const auto& law : laws) {
    Rng rng = make_stream(9, 0);
    const int trials = 40'000;
    const std::int64_t count = 7;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < trials; ++i) {
      const double s = draw_daily_sum(law, count, rng);
      sum += s;
      sq += s * s;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sq / trials - mean * mean) / trials);
    CHECK(std::fabs(mean - 2.0 * count) <= 4.0 * se + 1e-12);
    CHECK(draw_daily_sum(law, 0, rng) == 0.0);
  }
}

TEST_CASE("normalized negative binomial sums approach the gamma limit") {
  const std::vector<std::int64_t> grid{10, 100, 1000, 10000};
  for (const auto& law : {DailyLaw::constant_law(2.0), DailyLaw::exponential(2.0)}) {
    const auto points = verify_lln_negbin_sums(0.85, 1.0, 0.5, law, grid, 100'000, 11);
    REQUIRE(points.size() == grid.size());
    CHECK(points[0].p == doctest::Approx(0.1));
    CHECK(points.front().ks > points.back().ks);
    CHECK(points.back().ks < 0.01);
  }
  // Heavy but finite-mean tails converge too, only more slowly.
  const std::vector<std::int64_t> small{10, 1000};
  const auto heavy = verify_lln_negbin_sums(0.85, 1.0, 0.5, DailyLaw::pareto(2.0, 2.5), small,
                                            20'000, 12);
  CHECK(heavy.front().ks > heavy.back().ks);
}

TEST_CASE("LLN simulation does not depend on the thread count") {
  const std::vector<std::int64_t> grid{50, 500};
  const auto law = DailyLaw::gamma_law(1.0, 0.7);
  const auto a = verify_lln_negbin_sums(0.85, 1.0, 0.5, law, grid, 10'000, 13, 1);
  const auto b = verify_lln_negbin_sums(0.85, 1.0, 0.5, law, grid, 10'000, 13, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(a[i].ks == b[i].ks);
  CHECK_THROWS_AS(verify_lln_negbin_sums(0.85, 1.0, 0.5, law, std::vector<std::int64_t>{5, 5},
                                         100, 1),
                  ConfigError);
}

TEST_CASE("tempered SF law tends to the Frechet law") {
  const std::vector<std::int64_t> grid{1, 4, 16, 64, 256, 1024};
  const auto points = verify_frechet_limit(0.85, 0.05, 2.0, grid);
  REQUIRE(points.size() == grid.size());
  for (std::size_t i = 1; i < points.size(); ++i) CHECK(points[i].distance < points[i - 1].distance);
  CHECK(points.back().distance < 1e-3);
}

TEST_CASE("maximum daily sampler matches its law") {
  const TemperedSFParams params(0.847, 0.01, 2.261);
  CHECK(verify_max_daily_law(params, 100'000, 3) < oracle::ks_critical_99(100'000));
}

TEST_CASE("calibration of the total-volume tests") {
  const auto c = calibrate_test(Statistic::sr0, 2, 1, 1.0, 0.5, 100'000, 21);
  CHECK(std::fabs(c.rate - 0.5) <= 3.0 * c.standard_error);
  CHECK(c.threshold == doctest::Approx(1.0));
  for (double eps : {0.01, 0.05}) {
    const auto g = calibrate_test(Statistic::sr0_group, 15, 3, 0.85, eps, 100'000, 22);
    CHECK(std::fabs(g.rate - eps) <= 3.0 * g.standard_error);
  }
  const auto serial = null_statistics(Statistic::sr0, 5, 1, 0.85, 10'000, 23, 1);
  const auto threaded = null_statistics(Statistic::sr0, 5, 1, 0.85, 10'000, 23, 8);
  CHECK(serial == threaded);
}

TEST_CASE("fitted tempered SF law reproduces the data") {
  const TemperedSFParams truth(0.85, 0.02, 1.8);
  const auto sample = sample_tempered_sf(truth, 100'000, 41);
  const auto fitted = fit_tempered_sf_ls(sample, truth.r);
  const auto resampled = sample_tempered_sf(fitted, 100'000, 42);
  for (double p : {0.25, 0.5, 0.75, 0.9}) {
    std::vector<double> a(sample), b(resampled);
    const auto ia = static_cast<std::ptrdiff_t>(p * a.size());
    std::nth_element(a.begin(), a.begin() + ia, a.end());
    std::nth_element(b.begin(), b.begin() + ia, b.end());
    CHECK(std::fabs(b[ia] / a[ia] - 1.0) < 0.05);
  }
}

TEST_CASE("synthetic series") {
  SyntheticSeriesSpec spec;
  spec.periods = 200;
  const auto a = synthetic_series(spec, 5);
  const auto b = synthetic_series(spec, 5);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].precip_mm == b.records[i].precip_mm);
  CHECK(extract_wet_periods(a).size() == 200);
  spec.mean_dry_gap = 0.5;
  CHECK_THROWS_AS(synthetic_series(spec, 5), ConfigError);
}
