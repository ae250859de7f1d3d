#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "precip/errors.hpp"
#include "precip/io.hpp"
#include "precip/segmentation.hpp"
#include "precip/simulate.hpp"

using namespace precip;

namespace {

DailySeries make_series(const std::vector<std::optional<double>>& values,
                        Date start = parse_date("2000-01-01")) {
  DailySeries s;
  s.station = "test";
  Date d = start;
  for (const auto& v : values) {
    s.records.push_back(DailyRecord{d, v});
    d += std::chrono::days{1};
  }
  return s;
}

}  // namespace

TEST_CASE("dates parse and format") {
  const Date d = parse_date("1950-02-28");
  CHECK(format_date(d) == "1950-02-28");
  CHECK(format_date(d + std::chrono::days{1}) == "1950-03-01");
  CHECK_THROWS_AS(parse_date("1950-02-30"), InputError);
  CHECK_THROWS_AS(parse_date("1950/02/01"), InputError);
  CHECK_THROWS_AS(parse_date("19500201"), InputError);
  CHECK_THROWS_AS(parse_date("195a-02-01"), InputError);
}

TEST_CASE("two periods from a five-day series") {
  const auto periods = extract_wet_periods(make_series({0.0, 1.2, 3.4, 0.0, 5.0}), 0.0);
  REQUIRE(periods.size() == 2);
  CHECK(periods[0].duration == 2);
  CHECK(periods[0].total == doctest::Approx(4.6));
  CHECK(periods[0].max_daily == 3.4);
  CHECK(format_date(periods[0].start_date) == "2000-01-02");
  CHECK(periods[1].duration == 1);
  CHECK(periods[1].total == 5.0);
  CHECK(periods[1].max_daily == 5.0);
  CHECK_FALSE(periods[0].has_missing);
}

TEST_CASE("all-dry series has no periods") {
  CHECK(extract_wet_periods(make_series({0.0, 0.0, 0.0})).empty());
}

TEST_CASE("missing-value policies") {
  const auto series = make_series({1.0, std::nullopt, 2.0});
  const auto broken = extract_wet_periods(series, 0.0, MissingPolicy::break_run);
  REQUIRE(broken.size() == 2);
  CHECK(broken[0].duration == 1);
  CHECK(broken[1].duration == 1);
  CHECK(broken[0].has_missing);
  CHECK(broken[1].has_missing);

  const auto skipped = extract_wet_periods(series, 0.0, MissingPolicy::skip);
  REQUIRE(skipped.size() == 1);
  CHECK(skipped[0].duration == 2);
  CHECK(skipped[0].total == 3.0);
  CHECK(skipped[0].has_missing);
}

TEST_CASE("calendar gaps count as missing days") {
  DailySeries s = make_series({1.0});
  s.records.push_back(DailyRecord{parse_date("2000-01-04"), 2.0});
  CHECK(extract_wet_periods(s, 0.0, MissingPolicy::break_run).size() == 2);
  CHECK(extract_wet_periods(s, 0.0, MissingPolicy::skip).size() == 1);
}

TEST_CASE("wet threshold is strict") {
  const auto periods = extract_wet_periods(make_series({0.1, 0.1, 0.5, 0.1}), 0.1);
  REQUIRE(periods.size() == 1);
  CHECK(periods[0].duration == 1);
  CHECK(periods[0].total == 0.5);
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(extract_wet_periods(DailySeries{}), InputError);
  DailySeries s = make_series({1.0, 2.0});
  s.records[1].date = s.records[0].date;
  CHECK_THROWS_AS(extract_wet_periods(s), InputError);
  CHECK_THROWS_AS(extract_wet_periods(make_series({-1.0})), InputError);
}

TEST_CASE("reconstruction, wet-day count and idempotence on random series") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution wet(0.45);
  std::bernoulli_distribution missing(0.03);
  std::exponential_distribution<double> amount(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::optional<double>> values;
    for (int i = 0; i < 400; ++i) {
      if (missing(rng)) {
        values.emplace_back(std::nullopt);
      } else {
        values.emplace_back(wet(rng) ? amount(rng) + 1e-3 : 0.0);
      }
    }
    const auto series = make_series(values);
    const auto periods = extract_wet_periods(series);

    // Rebuild the wet days from the periods; everything else must be dry or missing.
    std::vector<std::optional<double>> rebuilt(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i]) rebuilt[i] = std::nullopt;
    }
    std::size_t wet_days = 0;
    for (const auto& p : periods) {
      const auto offset = (p.start_date - series.records.front().date).count();
      for (int j = 0; j < p.duration; ++j) rebuilt[static_cast<std::size_t>(offset + j)] = p.dailies[j];
      double sum = 0.0;
      for (double v : p.dailies) sum += v;
      CHECK(std::fabs(p.total - sum) <= 1e-9 * sum);
      CHECK(p.max_daily == *std::max_element(p.dailies.begin(), p.dailies.end()));
      CHECK(p.duration == static_cast<int>(p.dailies.size()));
      wet_days += p.dailies.size();
    }
    CHECK(rebuilt == values);
    std::size_t expected_wet = 0;
    for (const auto& v : values) expected_wet += (v && *v > 0.0);
    CHECK(wet_days == expected_wet);

    // Padding with dry days changes only the calendar, not the periods.
    std::vector<std::optional<double>> padded{0.0, 0.0, 0.0};
    padded.insert(padded.end(), values.begin(), values.end());
    padded.insert(padded.end(), {0.0, 0.0});
    const auto again = extract_wet_periods(make_series(padded, parse_date("1999-12-29")));
    REQUIRE(again.size() == periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
      CHECK(again[i].start_date == periods[i].start_date);
      CHECK(again[i].dailies == periods[i].dailies);
    }
  }
}

TEST_CASE("cumulative means") {
  const auto means = cumulative_means(make_series({0.0, 2.0, 0.0, 4.0}));
  REQUIRE(means.size() == 2);
  CHECK(means[0] == std::pair<std::size_t, double>{1, 2.0});
  CHECK(means[1] == std::pair<std::size_t, double>{2, 3.0});
  for (const auto& [n, m] : cumulative_means(make_series({1.5, 1.5, 1.5, 0.0, 1.5}))) {
    CHECK(m == 1.5);
  }
  CHECK_THROWS_AS(cumulative_means(make_series({0.0, 0.0})), InputError);

  const GammaParams law(0.8, 0.2);
  const auto draws = sample_gamma(law, 100'000, 17);
  std::vector<std::optional<double>> values(draws.begin(), draws.end());
  const auto running = cumulative_means(make_series(values));
  const double sd = std::sqrt(law.shape) / law.rate;
  CHECK(std::fabs(running.back().second - law.shape / law.rate) < 5.0 * sd / std::sqrt(1e5));
}

TEST_CASE("mean inter-onset gap") {
  std::vector<WetPeriod> periods(3);
  const Date base = parse_date("2001-05-01");
  for (int i = 0; i < 3; ++i) periods[i].start_date = base + std::chrono::days{6 * i};
  CHECK(mean_inter_onset_gap(periods) == 6.0);
  periods.resize(2);
  periods[1].start_date = base + std::chrono::days{9};
  CHECK(mean_inter_onset_gap(periods) == 9.0);
  periods.resize(1);
  CHECK_THROWS_AS(mean_inter_onset_gap(periods), InputError);
}

TEST_CASE("onset gap of a renewal series is mean wet plus mean dry run") {
  SyntheticSeriesSpec spec;
  spec.durations = NegBinParams(0.85, 0.3);
  spec.mean_dry_gap = 4.0;
  spec.periods = 10'000;
  const auto periods = extract_wet_periods(synthetic_series(spec, 2024));
  CHECK(periods.size() == spec.periods);
  const double mean_wet = 1.0 + negbin_mean(spec.durations);
  const double expected = mean_wet + spec.mean_dry_gap;
  // Variance of one cycle: NB variance plus geometric variance of the dry run.
  const double var = spec.durations.r * (1.0 - spec.durations.p) /
                         (spec.durations.p * spec.durations.p) +
                     (spec.mean_dry_gap - 1.0) * spec.mean_dry_gap;
  const double se = std::sqrt(var / static_cast<double>(spec.periods - 1));
  CHECK(std::fabs(mean_inter_onset_gap(periods) - expected) <= 3.0 * se);
}

TEST_CASE("daily CSV reader") {
  std::istringstream plain("date,precip_mm\n2000-01-01,0\n2000-01-02,1.2\n2000-01-03,NA\n"
                           "2000-01-04,\n2000-01-05,5.0\n");
  const auto s = read_daily_csv(plain);
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].records.size() == 5);
  CHECK_FALSE(s[0].records[2].precip_mm.has_value());
  CHECK_FALSE(s[0].records[3].precip_mm.has_value());
  CHECK(*s[0].records[4].precip_mm == 5.0);

  std::istringstream multi("station,date,precip_mm\nA,2000-01-01,1\nB,2000-01-01,2\nA,2000-01-02,3\n");
  const auto m = read_daily_csv(multi);
  REQUIRE(m.size() == 2);
  CHECK(m[0].station == "A");
  CHECK(m[0].records.size() == 2);
  CHECK(m[1].station == "B");

  std::istringstream headerless("2000-01-01,1\r\n2000-01-02,0\r\n");
  CHECK(read_daily_csv(headerless)[0].records.size() == 2);

  std::istringstream bad("date,precip_mm\n2000-13-01,1\n");
  CHECK_THROWS_AS(read_daily_csv(bad), InputError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_daily_csv(empty), InputError);
  std::istringstream garbage("date,precip_mm\n2000-01-01,abc\n");
  CHECK_THROWS_AS(read_daily_csv(garbage), InputError);
}
