#include "precip/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "precip/errors.hpp"

namespace precip {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("line " + std::to_string(line_no) + ": cannot parse number '" +
                     std::string(text) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<DailySeries> read_daily_csv(std::istream& in) {
  std::vector<DailySeries> stations;
  std::map<std::string, std::size_t, std::less<>> index;
  int station_col = -1;
  int date_col = 0;
  int precip_col = 1;
  bool first = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split(line, ',');
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (first) {
      first = false;
      if (fields[0] == "station" || fields[0] == "date") {
        station_col = -1;
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == "station") station_col = static_cast<int>(i);
          if (fields[i] == "date") date_col = static_cast<int>(i);
          if (fields[i] == "precip_mm" || fields[i] == "precip") precip_col = static_cast<int>(i);
        }
        continue;
      }
      if (fields.size() >= 3) {
        station_col = 0;
        date_col = 1;
        precip_col = 2;
      }
    }
    const auto need = static_cast<std::size_t>(std::max({station_col, date_col, precip_col}) + 1);
    if (fields.size() < need) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(need) +
                       " fields");
    }
    const std::string station = station_col >= 0 ? std::string(fields[station_col]) : "";
    Date date;
    try {
      date = parse_date(fields[date_col]);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    std::optional<double> precip;
    const auto raw = fields[precip_col];
    if (!raw.empty() && raw != "NA") {
      precip = parse_double(raw, line_no);
      if (!(*precip >= 0.0)) {
        throw InputError("line " + std::to_string(line_no) + ": negative precipitation");
      }
    }
    auto it = index.find(station);
    if (it == index.end()) {
      it = index.emplace(station, stations.size()).first;
      stations.push_back(DailySeries{station, {}});
    }
    stations[it->second].records.push_back(DailyRecord{date, precip});
  }
  if (stations.empty()) throw InputError("input contains no daily records");
  return stations;
}

std::vector<DailySeries> read_daily_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_daily_csv(in);
}

nlohmann::json to_json(const WetPeriod& period, const std::string& station) {
  nlohmann::json j;
  j["station"] = station;
  j["start_date"] = format_date(period.start_date);
  j["duration"] = period.duration;
  j["dailies"] = period.dailies;
  j["total"] = period.total;
  j["max_daily"] = period.max_daily;
  j["has_missing"] = period.has_missing;
  return j;
}

WetPeriod period_from_json(const nlohmann::json& j) {
  try {
    WetPeriod p;
    p.start_date = parse_date(j.at("start_date").get<std::string>());
    p.dailies = j.at("dailies").get<std::vector<double>>();
    p.duration = j.contains("duration") ? j.at("duration").get<int>()
                                        : static_cast<int>(p.dailies.size());
    if (p.dailies.empty() || p.duration != static_cast<int>(p.dailies.size())) {
      throw InputError("period duration does not match its daily volumes");
    }
    p.total = 0.0;
    p.max_daily = 0.0;
    for (const double v : p.dailies) {
      if (!(v > 0.0)) throw InputError("period daily volumes must be positive");
      p.total += v;
      p.max_daily = std::max(p.max_daily, v);
    }
    p.has_missing = j.value("has_missing", false);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed period record: ") + e.what());
  }
}

nlohmann::json to_json(const NegBinParams& params) { return {{"r", params.r}, {"p", params.p}}; }

nlohmann::json to_json(const TemperedSFParams& params) {
  return {{"r", params.r}, {"lambda", params.lambda}, {"gamma", params.gamma}};
}

nlohmann::json to_json(const GammaParams& params) {
  return {{"shape", params.shape}, {"rate", params.rate}};
}

nlohmann::json to_json(const FitReport& report) {
  nlohmann::json j;
  j["model"] = to_string(report.model);
  j["params"] = std::visit([](const auto& p) { return to_json(p); }, report.params);
  j["censor_min_duration"] = report.censor_min_duration;
  j["sample_size"] = report.sample_size;
  j["discrepancy"] = report.discrepancy;
  if (report.quantile_orders) {
    j["quantile_orders"] = *report.quantile_orders;
  } else {
    j["quantile_orders"] = nullptr;
  }
  j["moments_fallback"] = report.moments_fallback;
  j["duration_shift"] = report.duration_shift;
  return j;
}

nlohmann::json to_json(const TestVerdict& verdict) {
  return {{"statistic", to_string(verdict.statistic)},
          {"value", verdict.value},
          {"threshold", verdict.threshold},
          {"epsilon", verdict.epsilon},
          {"reject", verdict.reject}};
}

void write_periods_json(std::ostream& out, const std::vector<StationPeriods>& stations) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : stations) {
    for (const auto& p : s.periods) arr.push_back(to_json(p, s.station));
  }
  out << arr.dump(1) << '\n';
}

void write_periods_csv(std::ostream& out, const std::vector<StationPeriods>& stations) {
  out << "station,start_date,duration,total,max_daily,has_missing,dailies\n";
  for (const auto& s : stations) {
    for (const auto& p : s.periods) {
      out << s.station << ',' << format_date(p.start_date) << ',' << p.duration << ','
          << format_number(p.total) << ',' << format_number(p.max_daily) << ','
          << (p.has_missing ? 1 : 0) << ',';
      for (std::size_t i = 0; i < p.dailies.size(); ++i) {
        if (i) out << ';';
        out << format_number(p.dailies[i]);
      }
      out << '\n';
    }
  }
}

void write_periods(const std::filesystem::path& path, const std::vector<StationPeriods>& stations) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  if (path.extension() == ".csv") {
    write_periods_csv(out, stations);
  } else {
    write_periods_json(out, stations);
  }
}

std::vector<StationPeriods> read_periods(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<StationPeriods> out;
  const auto add = [&](const std::string& station, WetPeriod p) {
    if (out.empty() || out.back().station != station) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const StationPeriods& s) { return s.station == station; });
      if (it == out.end()) {
        out.push_back(StationPeriods{station, {}});
      } else {
        it->periods.push_back(std::move(p));
        return;
      }
    }
    out.back().periods.push_back(std::move(p));
  };

  if (path.extension() == ".csv") {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line_no == 1 || trim(line).empty()) continue;
      const auto f = split(line, ',');
      if (f.size() != 7) throw InputError("line " + std::to_string(line_no) + ": expected 7 fields");
      nlohmann::json j;
      j["start_date"] = std::string(f[1]);
      j["duration"] = static_cast<int>(parse_double(f[2], line_no));
      std::vector<double> dailies;
      for (const auto d : split(f[6], ';')) dailies.push_back(parse_double(d, line_no));
      j["dailies"] = dailies;
      j["has_missing"] = f[5] == "1";
      add(std::string(f[0]), period_from_json(j));
    }
  } else {
    nlohmann::json arr;
    try {
      in >> arr;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!arr.is_array()) throw InputError("period file must hold a JSON array");
    for (const auto& j : arr) add(j.value("station", std::string()), period_from_json(j));
  }
  return out;
}

}  // namespace precip
