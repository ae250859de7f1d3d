#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace precip {

using Date = std::chrono::sys_days;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws InputError.
Date parse_date(std::string_view text);
std::string format_date(Date date);

struct DailyRecord {
  Date date;
  std::optional<double> precip_mm;  // nullopt = missing
};

/// Daily records of one station, ordered by date.
struct DailySeries {
  std::string station;
  std::vector<DailyRecord> records;
};

/// A maximal run of wet days.
struct WetPeriod {
  Date start_date;
  int duration = 0;
  std::vector<double> dailies;
  double total = 0.0;
  double max_daily = 0.0;
  // Set when the run was joined across missing days (MissingPolicy::skip).
  bool has_missing = false;
};

enum class MissingPolicy { break_run, skip };

MissingPolicy parse_missing_policy(std::string_view text);

/// Splits a series into maximal runs of days with precip > wet_threshold.
///
/// A calendar gap between consecutive records counts as missing days. Under
/// MissingPolicy::break_run a missing day ends the current run; under
/// MissingPolicy::skip it is dropped from the calendar and the run continues,
/// with the resulting period flagged via `has_missing`.
std::vector<WetPeriod> extract_wet_periods(const DailySeries& series, double wet_threshold = 0.0,
                                           MissingPolicy policy = MissingPolicy::break_run);

/// Running means of wet-day volumes: element i is (i + 1, mean of first i + 1 wet days).
std::vector<std::pair<std::size_t, double>> cumulative_means(const DailySeries& series,
                                                             double wet_threshold = 0.0);

/// Mean distance in days between the first days of successive periods.
double mean_inter_onset_gap(std::span<const WetPeriod> periods);

}  // namespace precip
