#include "precip/segmentation.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "precip/errors.hpp"

namespace precip {
namespace {

int parse_field(std::string_view text, std::string_view whole) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("malformed date '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw InputError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{parse_field(text.substr(0, 4), text)},
                                        std::chrono::month{static_cast<unsigned>(
                                            parse_field(text.substr(5, 2), text))},
                                        std::chrono::day{static_cast<unsigned>(
                                            parse_field(text.substr(8, 2), text))}};
  if (!ymd.ok()) throw InputError("invalid calendar date '" + std::string(text) + "'");
  return Date{ymd};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

MissingPolicy parse_missing_policy(std::string_view text) {
  if (text == "break") return MissingPolicy::break_run;
  if (text == "skip") return MissingPolicy::skip;
  throw ConfigError("unknown missing-value policy '" + std::string(text) + "'");
}

std::vector<WetPeriod> extract_wet_periods(const DailySeries& series, double wet_threshold,
                                           MissingPolicy policy) {
  if (series.records.empty()) throw InputError("empty daily series");
  if (!(wet_threshold >= 0.0)) throw DomainError("wet threshold must be nonnegative");

  std::vector<WetPeriod> periods;
  std::optional<WetPeriod> current;
  bool missing_pending = false;  // missing days seen since the last wet or dry day

  const auto close = [&](bool next_is_missing) {
    if (!current) return;
    if (next_is_missing) current->has_missing = true;
    periods.push_back(std::move(*current));
    current.reset();
  };

  const auto on_missing = [&] {
    if (policy == MissingPolicy::break_run) {
      close(true);
    }
    missing_pending = true;
  };

  std::optional<Date> previous;
  for (const auto& rec : series.records) {
    if (previous) {
      if (rec.date <= *previous) {
        throw InputError("dates must be strictly increasing (station '" + series.station +
                         "', at " + format_date(rec.date) + ")");
      }
      // Calendar gaps are missing days.
      if (rec.date - *previous > std::chrono::days{1}) on_missing();
    }
    previous = rec.date;

    if (!rec.precip_mm) {
      on_missing();
      continue;
    }
    const double v = *rec.precip_mm;
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError("precipitation must be a nonnegative number (at " + format_date(rec.date) +
                       ")");
    }
    if (v > wet_threshold) {
      if (!current) {
        current.emplace();
        current->start_date = rec.date;
        // A run starting right after missing days may be truncated.
        current->has_missing = missing_pending;
      } else if (missing_pending) {
        current->has_missing = true;
      }
      current->dailies.push_back(v);
      current->total += v;
      current->max_daily = std::max(current->max_daily, v);
      ++current->duration;
    } else {
      close(missing_pending);
    }
    missing_pending = false;
  }
  close(false);
  return periods;
}

std::vector<std::pair<std::size_t, double>> cumulative_means(const DailySeries& series,
                                                             double wet_threshold) {
  std::vector<std::pair<std::size_t, double>> out;
  double sum = 0.0;
  for (const auto& rec : series.records) {
    if (!rec.precip_mm || !(*rec.precip_mm > wet_threshold)) continue;
    sum += *rec.precip_mm;
    const std::size_t n = out.size() + 1;
    out.emplace_back(n, sum / static_cast<double>(n));
  }
  if (out.empty()) throw InputError("series contains no wet days");
  return out;
}

double mean_inter_onset_gap(std::span<const WetPeriod> periods) {
  if (periods.size() < 2) throw InputError("at least two wet periods are needed for the onset gap");
  double sum = 0.0;
  for (std::size_t i = 1; i < periods.size(); ++i) {
    sum += static_cast<double>((periods[i].start_date - periods[i - 1].start_date).count());
  }
  return sum / static_cast<double>(periods.size() - 1);
}

}  // namespace precip
