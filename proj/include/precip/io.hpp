#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "precip/anomaly_tests.hpp"
#include "precip/fitting.hpp"
#include "precip/segmentation.hpp"
#include "precip/windowing.hpp"

namespace precip {

/// Reads `date,precip_mm` rows (optionally prefixed by a `station` column).
/// Empty fields and `NA` are missing values. A header row is detected by a
/// non-date first field. Stations are returned in order of first appearance.
std::vector<DailySeries> read_daily_csv(std::istream& in);
std::vector<DailySeries> read_daily_csv(const std::filesystem::path& path);

struct StationPeriods {
  std::string station;
  std::vector<WetPeriod> periods;
};

nlohmann::json to_json(const WetPeriod& period, const std::string& station);
nlohmann::json to_json(const FitReport& report);
nlohmann::json to_json(const TestVerdict& verdict);
nlohmann::json to_json(const NegBinParams& params);
nlohmann::json to_json(const TemperedSFParams& params);
nlohmann::json to_json(const GammaParams& params);

WetPeriod period_from_json(const nlohmann::json& j);

/// Period files: a JSON array of period objects (.json) or a CSV with one
/// row per period and `;`-separated dailies (.csv).
void write_periods(const std::filesystem::path& path, const std::vector<StationPeriods>& stations);
std::vector<StationPeriods> read_periods(const std::filesystem::path& path);

void write_periods_json(std::ostream& out, const std::vector<StationPeriods>& stations);
void write_periods_csv(std::ostream& out, const std::vector<StationPeriods>& stations);

/// Formats a double with 17 significant digits.
std::string format_number(double value);

}  // namespace precip
