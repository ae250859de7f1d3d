#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "precip/anomaly_tests.hpp"
#include "precip/errors.hpp"
#include "precip/fitting.hpp"
#include "precip/io.hpp"
#include "precip/manifest.hpp"
#include "precip/segmentation.hpp"
#include "precip/simulate.hpp"
#include "precip/windowing.hpp"

namespace precip::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void init_logging() {
  static bool done = false;
  if (done) return;
  done = true;
  auto logger = spdlog::stderr_logger_st("precip");
  logger->set_pattern("precip: %l: %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("PRECIP_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

enum class Format { json, jsonl, csv };

Format format_for(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".json") return Format::json;
  if (ext == ".jsonl") return Format::jsonl;
  if (ext == ".csv") return Format::csv;
  throw ConfigError("cannot infer output format from '" + path.string() +
                    "' (use .json, .jsonl or .csv)");
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Writes flat records in the format chosen by the file extension.
void write_records(const fs::path& path, const std::vector<json>& rows,
                   const std::vector<std::string>& columns) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  switch (format_for(path)) {
    case Format::json:
      out << json(rows).dump(1) << '\n';
      break;
    case Format::jsonl:
      for (const auto& row : rows) out << row.dump() << '\n';
      break;
    case Format::csv:
      for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
      out << '\n';
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
          out << (c ? "," : "") << (row.contains(columns[c]) ? csv_cell(row[columns[c]]) : "");
        }
        out << '\n';
      }
      break;
  }
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in " + what);
    }
  }
  if (values.empty()) throw ConfigError(what + " is empty");
  return values;
}

QuantileOrders parse_orders(const std::string& text) {
  const auto v = parse_doubles(text, "--quantiles");
  if (v.size() != 3) throw ConfigError("--quantiles needs exactly three orders p1,p2,p3");
  QuantileOrders orders{v[0], v[1], v[2]};
  for (double p : orders) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile orders must lie in (0, 1)");
  }
  if (!(orders[0] < orders[1] && orders[1] < orders[2])) {
    throw ConfigError("quantile orders must be strictly increasing");
  }
  return orders;
}

std::vector<double> parse_levels(const std::string& text) {
  auto eps = parse_doubles(text, "--epsilon");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("significance levels must lie in (0, 1)");
  }
  return eps;
}

std::vector<StationPeriods> load_periods(const fs::path& path) {
  auto stations = read_periods(path);
  std::size_t total = 0;
  for (const auto& s : stations) total += s.periods.size();
  if (total == 0) throw InputError("'" + path.string() + "' contains no wet periods");
  return stations;
}

double station_r(const StationPeriods& s, const std::optional<double>& given) {
  if (given) {
    if (!(*given > 0.0)) throw ConfigError("--r must be positive");
    return *given;
  }
  std::vector<int> durations;
  durations.reserve(s.periods.size());
  for (const auto& p : s.periods) durations.push_back(p.duration);
  const double r = fit_negbin(durations).params.r;
  spdlog::info("{}: fitted negative binomial r = {}", s.station, r);
  return r;
}

class Run {
 public:
  Run(std::string command, const std::vector<std::string>& argv) {
    manifest_.command = std::move(command);
    manifest_.argv = argv;
    manifest_.working_directory = fs::current_path().string();
  }

  json& parameters() { return manifest_.parameters; }
  void input(const fs::path& path) { manifest_.add_input(path); }
  void output(const fs::path& path) { manifest_.add_output(path); }

  // The manifest sits next to the primary output.
  void finish(const fs::path& primary) { manifest_.write(manifest_path_for(primary)); }

 private:
  RunManifest manifest_;
};

// --- segment -----------------------------------------------------------------

struct SegmentArgs {
  std::string input, output;
  double wet_threshold = 0.0;
  std::string missing = "break";
};

int cmd_segment(const SegmentArgs& a, const std::vector<std::string>& argv) {
  const auto policy = parse_missing_policy(a.missing);
  format_for(a.output);
  Run run("segment", argv);
  run.input(a.input);
  run.parameters() = {{"wet_threshold", a.wet_threshold}, {"missing", a.missing}};

  std::vector<StationPeriods> out;
  for (const auto& series : read_daily_csv(fs::path(a.input))) {
    // Files without a station column are named after the file.
    const auto name = series.station.empty() ? fs::path(a.input).stem().string() : series.station;
    out.push_back({name, extract_wet_periods(series, a.wet_threshold, policy)});
    spdlog::info("{}: {} wet periods", series.station, out.back().periods.size());
  }
  write_periods(a.output, out);
  run.output(a.output);
  run.finish(a.output);
  return kOk;
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
  std::string input, output;
  std::string model = "tsf-ls";
  int min_duration = 1;
  std::string quantiles = "0.25,0.5,0.75";
  std::optional<double> r;
  bool table = false;
  std::string durations;
};

std::vector<int> parse_thresholds(const std::string& text) {
  if (text.empty()) return kDefaultCensoringThresholds;
  std::vector<int> out;
  for (double v : parse_doubles(text, "--durations")) {
    if (v < 1.0 || v != static_cast<int>(v)) throw ConfigError("--durations must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

int cmd_fit(const FitArgs& a, const std::vector<std::string>& argv) {
  const auto orders = parse_orders(a.quantiles);
  const auto model = parse_fit_model(a.model);
  const auto thresholds = parse_thresholds(a.durations);
  format_for(a.output);
  if (a.min_duration < 1) throw ConfigError("--min-duration must be at least 1");

  Run run("fit", argv);
  run.input(a.input);
  const auto stations = load_periods(a.input);
  run.parameters() = {{"model", a.model},       {"min_duration", a.min_duration},
                      {"quantiles", orders},     {"table", a.table},
                      {"durations", thresholds}, {"r", a.r ? json(*a.r) : json(nullptr)}};

  std::vector<json> rows;
  json resolved_r = json::object();
  for (const auto& s : stations) {
    if (a.table) {
      const double r = station_r(s, a.r);
      resolved_r[s.station] = r;
      for (const auto& row : censoring_table(s.periods, r, thresholds, orders)) {
        json j{{"station", s.station},
               {"min_duration", row.min_duration},
               {"sample_size", row.sample_size},
               {"r", r},
               {"lambda_quantile", row.quantile ? json(row.quantile->lambda) : json(nullptr)},
               {"gamma_quantile", row.quantile ? json(row.quantile->gamma) : json(nullptr)},
               {"discrepancy_quantile",
                row.discrepancy_quantile ? json(*row.discrepancy_quantile) : json(nullptr)},
               {"lambda_ls", row.ls ? json(row.ls->lambda) : json(nullptr)},
               {"gamma_ls", row.ls ? json(row.ls->gamma) : json(nullptr)},
               {"discrepancy_ls", row.discrepancy_ls ? json(*row.discrepancy_ls) : json(nullptr)},
               {"note", row.note}};
        rows.push_back(std::move(j));
      }
    } else {
      FitRequest request;
      request.model = model;
      request.min_duration = a.min_duration;
      request.orders = orders;
      request.r = a.r;
      json j = to_json(fit_periods(s.periods, request));
      j["station"] = s.station;
      rows.push_back(std::move(j));
    }
  }
  if (a.table) run.parameters()["resolved_r"] = resolved_r;

  if (a.table) {
    write_records(a.output, rows,
                  {"station", "min_duration", "sample_size", "r", "lambda_quantile",
                   "gamma_quantile", "discrepancy_quantile", "lambda_ls", "gamma_ls",
                   "discrepancy_ls", "note"});
  } else if (format_for(a.output) == Format::csv) {
    // Flatten the parameter object into columns.
    std::vector<json> flat;
    for (const auto& j : rows) {
      json f = j;
      f.erase("params");
      f.erase("quantile_orders");
      for (const auto& [k, v] : j["params"].items()) f[k] = v;
      flat.push_back(std::move(f));
    }
    write_records(a.output, flat,
                  {"station", "model", "r", "p", "lambda", "gamma", "shape", "rate",
                   "censor_min_duration", "sample_size", "discrepancy", "moments_fallback",
                   "duration_shift"});
  } else {
    write_records(a.output, rows, {});
  }
  run.output(a.output);
  run.finish(a.output);
  return kOk;
}

// --- test-daily --------------------------------------------------------------

struct TestDailyArgs {
  std::string input, output, thresholds;
  std::string epsilon = "0.1,0.05,0.01";
  std::optional<double> r, lambda, gamma;
  std::string model = "tsf-quantile";
  int min_duration = 1;
  std::string quantiles = "0.25,0.5,0.75";
};

int cmd_test_daily(const TestDailyArgs& a, const std::vector<std::string>& argv) {
  const auto levels = parse_levels(a.epsilon);
  const auto orders = parse_orders(a.quantiles);
  const auto model = parse_fit_model(a.model);
  if (model != FitModel::tempered_sf_quantile && model != FitModel::tempered_sf_ls) {
    throw ConfigError("test-daily fits a tempered SF model (tsf-quantile or tsf-ls)");
  }
  const bool given = a.lambda || a.gamma;
  if (given && !(a.r && a.lambda && a.gamma)) {
    throw ConfigError("--r, --lambda and --gamma must be given together");
  }
  if (a.min_duration < 1) throw ConfigError("--min-duration must be at least 1");
  format_for(a.output);
  if (!a.thresholds.empty()) format_for(a.thresholds);

  Run run("test-daily", argv);
  run.input(a.input);
  const auto stations = load_periods(a.input);
  run.parameters() = {{"epsilon", levels}, {"model", a.model}, {"min_duration", a.min_duration},
                      {"quantiles", orders}};

  std::vector<json> rows, lines;
  json resolved = json::object();
  for (const auto& s : stations) {
    std::optional<TemperedSFParams> params;
    if (given) {
      params.emplace(*a.r, *a.lambda, *a.gamma);
    } else {
      FitRequest request;
      request.model = model;
      request.min_duration = a.min_duration;
      request.orders = orders;
      request.r = a.r;
      params = std::get<TemperedSFParams>(fit_periods(s.periods, request).params);
    }
    resolved[s.station] = to_json(*params);
    for (double eps : levels) {
      std::size_t flagged = 0;
      for (const auto& p : s.periods) {
        if (p.duration < a.min_duration) continue;
        const auto v = daily_max_test(p.max_daily, *params, eps);
        flagged += v.reject;
        json j = to_json(v);
        j["station"] = s.station;
        j["period_start"] = format_date(p.start_date);
        j["duration"] = p.duration;
        rows.push_back(std::move(j));
      }
      spdlog::info("{}: {} maxima above the {} quantile", s.station, flagged, 1.0 - eps);
      lines.push_back({{"station", s.station},
                       {"level", 1.0 - eps},
                       {"threshold", tempered_sf_quantile(*params, 1.0 - eps)}});
    }
  }
  run.parameters()["params"] = resolved;

  write_records(a.output, rows,
                {"station", "period_start", "duration", "statistic", "value", "threshold",
                 "epsilon", "reject"});
  run.output(a.output);
  if (!a.thresholds.empty()) {
    write_records(a.thresholds, lines, {"station", "level", "threshold"});
    run.output(a.thresholds);
  }
  run.finish(a.output);
  return kOk;
}

// --- scan --------------------------------------------------------------------

struct ScanArgs {
  std::string input, output;
  std::optional<int> m;
  int horizon_days = 30;
  double epsilon = 0.05;
  std::string target = "max";
  std::optional<double> r;
  unsigned threads = 1;
};

int cmd_scan(const ScanArgs& a, const std::vector<std::string>& argv) {
  const auto target = parse_target_mode(a.target);
  if (!(a.epsilon > 0.0 && a.epsilon < 1.0)) throw ConfigError("--epsilon must lie in (0, 1)");
  if (a.m && *a.m < 2) throw ConfigError("--m must be at least 2");
  if (a.horizon_days < 1) throw ConfigError("--horizon-days must be positive");
  if (a.threads < 1) throw ConfigError("--threads must be positive");
  format_for(a.output);

  Run run("scan", argv);
  run.input(a.input);
  const auto stations = load_periods(a.input);
  run.parameters() = {{"epsilon", a.epsilon}, {"target", a.target}};
  if (a.m) {
    run.parameters()["m"] = *a.m;
  } else {
    run.parameters()["horizon_days"] = a.horizon_days;
  }

  std::vector<json> rows;
  json resolved = json::object();
  for (const auto& s : stations) {
    ScanOptions opt;
    opt.epsilon = a.epsilon;
    opt.target = target;
    opt.threads = a.threads;
    opt.r = station_r(s, a.r);
    opt.m = a.m ? static_cast<std::size_t>(*a.m)
                : horizon_to_m(a.horizon_days, mean_inter_onset_gap(s.periods));
    resolved[s.station] = {{"m", opt.m}, {"r", opt.r}};

    std::vector<double> volumes;
    volumes.reserve(s.periods.size());
    for (const auto& p : s.periods) volumes.push_back(p.total);
    const auto verdicts = moving_scan(volumes, opt);
    const auto summary = summarize(verdicts);
    spdlog::info("{}: m = {}, relative {}, intermediate {}, absolute {}", s.station, opt.m,
                 summary.relative, summary.intermediate, summary.absolute);
    for (const auto& v : verdicts) {
      rows.push_back({{"station", s.station},
                      {"period_index", v.period_index},
                      {"start_date", format_date(s.periods[v.period_index].start_date)},
                      {"volume", volumes[v.period_index]},
                      {"windows_containing", v.windows_containing},
                      {"windows_flagged", v.windows_flagged},
                      {"class", to_string(v.cls)}});
    }
  }
  run.parameters()["resolved"] = resolved;

  write_records(a.output, rows,
                {"station", "period_index", "start_date", "volume", "windows_containing",
                 "windows_flagged", "class"});
  run.output(a.output);
  run.finish(a.output);
  return kOk;
}

// --- simulate ----------------------------------------------------------------

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  return field<T>(j, key, T{});
}

DailyLaw daily_law_from(const json& j) {
  DailyLaw law;
  const auto name = field<std::string>(j, "law", "exponential");
  law.kind = parse_daily_law(name);
  law.mean = field(j, "mean", 1.0);
  law.shape = name == "exponential" ? 1.0 : field(j, "shape", 1.0);
  law.tail_index = field(j, "tail_index", 3.0);
  law.correlation = field(j, "correlation", 0.5);
  law.validate();
  return law;
}

Statistic statistic_from(const std::string& name) {
  if (name == "SR") return Statistic::sr;
  if (name == "SR0") return Statistic::sr0;
  if (name == "SR0_group") return Statistic::sr0_group;
  throw ConfigError("unknown statistic '" + name + "' (SR, SR0 or SR0_group)");
}

struct SimulateArgs {
  std::string config, output;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
  if (a.threads < 1) throw ConfigError("--threads must be positive");
  std::ifstream in(a.config);
  if (!in) throw InputError("cannot open config '" + a.config + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  format_for(a.output);

  Run run("simulate", argv);
  run.input(a.config);
  const auto seed = a.seed ? *a.seed : field<std::uint64_t>(cfg, "seed", 0);
  const auto experiment = required<std::string>(cfg, "experiment");
  run.parameters() = {{"experiment", experiment}, {"seed", seed}, {"config", cfg}};
  const auto trials = field<std::size_t>(cfg, "trials", 100'000);
  if (trials == 0) throw ConfigError("trials must be positive");

  std::vector<json> rows;
  std::vector<std::string> columns;
  if (experiment == "lln") {
    const auto grid = required<std::vector<std::int64_t>>(cfg, "n_grid");
    const auto law = daily_law_from(field(cfg, "daily", json::object()));
    for (const auto& pt : verify_lln_negbin_sums(field(cfg, "r", 0.85), field(cfg, "mu", 1.0),
                                                 field(cfg, "q", 0.5), law, grid, trials, seed,
                                                 a.threads)) {
      rows.push_back({{"n", pt.n}, {"p", pt.p}, {"ks", pt.ks}, {"trials", trials}});
    }
    columns = {"n", "p", "ks", "trials"};
  } else if (experiment == "max_daily") {
    const TemperedSFParams params(field(cfg, "r", 1.0), field(cfg, "lambda", 1.0),
                                  field(cfg, "gamma", 1.0));
    rows.push_back({{"trials", trials}, {"ks", verify_max_daily_law(params, trials, seed)}});
    columns = {"trials", "ks"};
  } else if (experiment == "frechet") {
    const auto grid = required<std::vector<std::int64_t>>(cfg, "m_grid");
    for (const auto& pt : verify_frechet_limit(field(cfg, "r1", 0.85), field(cfg, "c", 0.05),
                                               field(cfg, "gamma", 2.0), grid,
                                               field<std::size_t>(cfg, "grid_points", 20001))) {
      rows.push_back({{"m", pt.m}, {"distance", pt.distance}});
    }
    columns = {"m", "distance"};
  } else if (experiment == "calibration") {
    const auto stat_name = field<std::string>(cfg, "statistic", "SR0");
    const auto stat = statistic_from(stat_name);
    const auto m = field<std::size_t>(cfg, "m", 15);
    const auto l = field<std::size_t>(cfg, "l", 1);
    const double r = field(cfg, "r", 0.85);
    std::vector<double> levels{0.05};
    if (cfg.contains("epsilon")) {
      levels = cfg["epsilon"].is_array() ? field<std::vector<double>>(cfg, "epsilon", {})
                                         : std::vector<double>{field(cfg, "epsilon", 0.05)};
    }
    for (double eps : levels) {
      const auto c = calibrate_test(stat, m, l, r, eps, trials, seed, a.threads);
      rows.push_back({{"statistic", stat_name}, {"m", m}, {"l", l}, {"r", r}, {"epsilon", eps},
                      {"trials", c.trials}, {"rejections", c.rejections}, {"rate", c.rate},
                      {"standard_error", c.standard_error}, {"threshold", c.threshold}});
    }
    columns = {"statistic", "m",         "l",    "r",          "epsilon",
               "trials",    "rejections", "rate", "standard_error", "threshold"};
  } else if (experiment == "series") {
    SyntheticSeriesSpec spec;
    spec.durations = NegBinParams(field(cfg, "duration_r", spec.durations.r),
                                  field(cfg, "duration_p", spec.durations.p));
    spec.dailies = GammaParams(field(cfg, "daily_shape", spec.dailies.shape),
                               field(cfg, "daily_rate", spec.dailies.rate));
    spec.mean_dry_gap = field(cfg, "mean_dry_gap", spec.mean_dry_gap);
    spec.periods = field<std::size_t>(cfg, "periods", spec.periods);
    spec.start = parse_date(field<std::string>(cfg, "start", "1950-01-01"));
    const auto series = synthetic_series(spec, seed);
    for (const auto& rec : series.records) {
      rows.push_back({{"station", series.station},
                      {"date", format_date(rec.date)},
                      {"precip_mm", rec.precip_mm ? json(*rec.precip_mm) : json(nullptr)}});
    }
    columns = {"station", "date", "precip_mm"};
  } else {
    throw ConfigError("unknown experiment '" + experiment +
                      "' (lln, max_daily, frechet, calibration or series)");
  }

  write_records(a.output, rows, columns);
  run.output(a.output);
  run.finish(a.output);
  return kOk;
}

// --- replay ------------------------------------------------------------------

int cmd_replay(const std::string& manifest_path) {
  const auto manifest = RunManifest::read(manifest_path);
  if (manifest.argv.size() < 2 || manifest.argv[1] == "replay") {
    throw ConfigError("manifest does not record a replayable command");
  }
  if (manifest.tool_version != kToolVersion) {
    spdlog::warn("manifest was written by version {}, this is {}", manifest.tool_version,
                 kToolVersion);
  }
  const auto here = fs::current_path();
  if (!manifest.working_directory.empty()) fs::current_path(manifest.working_directory);
  for (const auto& in : manifest.inputs) {
    if (!fs::exists(in.path) || sha256_file(in.path) != in.sha256) {
      spdlog::warn("input changed since the recorded run: {}", in.path);
    }
  }
  const int code = run(manifest.argv);
  std::vector<std::string> changed;
  for (const auto& out : manifest.outputs) {
    if (!fs::exists(out.path) || sha256_file(out.path) != out.sha256) changed.push_back(out.path);
  }
  fs::current_path(here);
  if (code != kOk) return code;
  for (const auto& path : changed) std::cerr << "precip: output differs: " << path << '\n';
  if (!changed.empty()) return kMismatch;
  std::cout << "replay identical: " << manifest.outputs.size() << " output(s)\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& argv) {
  init_logging();
  CLI::App app{"Wet-period segmentation, model fitting and precipitation anomaly tests", "precip"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "split a daily series into wet periods");
  segment->add_option("--input", seg.input, "daily CSV (station,date,precip_mm)")->required();
  segment->add_option("--output", seg.output, "periods file (.json or .csv)")->required();
  segment->add_option("--wet-threshold", seg.wet_threshold, "a day is wet when precip exceeds this")
      ->capture_default_str();
  segment->add_option("--missing", seg.missing, "missing-day policy: break or skip")
      ->capture_default_str();

  FitArgs fit;
  auto* fitc = app.add_subcommand("fit", "fit a model to wet periods");
  fitc->add_option("--input", fit.input, "periods file")->required();
  fitc->add_option("--output", fit.output, "report (.json or .csv)")->required();
  fitc->add_option("--model", fit.model, "negbin, tsf-quantile, tsf-ls or gamma-totals")
      ->capture_default_str();
  fitc->add_option("--min-duration", fit.min_duration, "use periods lasting at least this many days")
      ->capture_default_str();
  fitc->add_option("--quantiles", fit.quantiles, "orders p1,p2,p3 for the quantile method")
      ->capture_default_str();
  fitc->add_option("--r", fit.r, "tempered SF shape r (default: negative binomial fit)");
  fitc->add_flag("--table", fit.table, "compare both estimators over censoring thresholds");
  fitc->add_option("--durations", fit.durations, "censoring thresholds for --table, e.g. 1,2,3");

  TestDailyArgs td;
  auto* testd = app.add_subcommand("test-daily", "flag anomalously large daily maxima");
  testd->add_option("--input", td.input, "periods file")->required();
  testd->add_option("--output", td.output, "verdicts (.jsonl, .json or .csv)")->required();
  testd->add_option("--thresholds", td.thresholds, "also write threshold levels here");
  testd->add_option("--epsilon", td.epsilon, "significance levels")->capture_default_str();
  testd->add_option("--r", td.r, "tempered SF r");
  testd->add_option("--lambda", td.lambda, "tempered SF lambda (skips fitting)");
  testd->add_option("--gamma", td.gamma, "tempered SF gamma (skips fitting)");
  testd->add_option("--model", td.model, "tsf-quantile or tsf-ls")->capture_default_str();
  testd->add_option("--min-duration", td.min_duration, "censoring threshold")->capture_default_str();
  testd->add_option("--quantiles", td.quantiles, "orders for the quantile method")
      ->capture_default_str();

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "moving-window test of wet-period totals");
  scan->add_option("--input", sc.input, "periods file")->required();
  scan->add_option("--output", sc.output, "verdicts (.jsonl, .json or .csv)")->required();
  auto* m_opt = scan->add_option("--m", sc.m, "window width in periods");
  scan->add_option("--horizon-days", sc.horizon_days, "window width in days")
      ->capture_default_str()
      ->excludes(m_opt);
  scan->add_option("--epsilon", sc.epsilon, "significance level")->capture_default_str();
  scan->add_option("--target", sc.target, "max or fixed")->capture_default_str();
  scan->add_option("--r", sc.r, "gamma shape r (default: negative binomial fit)");
  scan->add_option("--threads", sc.threads, "worker threads")->capture_default_str();

  SimulateArgs sim;
  auto* simc = app.add_subcommand("simulate", "run a Monte Carlo experiment from a JSON config");
  simc->add_option("--config", sim.config, "experiment config (JSON)")->required();
  simc->add_option("--output", sim.output, "results (.csv, .json or .jsonl)")->required();
  simc->add_option("--seed", sim.seed, "random seed (overrides the config; default 0)");
  simc->add_option("--threads", sim.threads, "worker threads")->capture_default_str();

  std::string manifest;
  auto* replay = app.add_subcommand("replay", "re-run a recorded command and compare outputs");
  replay->add_option("manifest", manifest, "run manifest")->required();

  std::vector<const char*> raw;
  raw.reserve(argv.size());
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*segment) return cmd_segment(seg, argv);
    if (*fitc) return cmd_fit(fit, argv);
    if (*testd) return cmd_test_daily(td, argv);
    if (*scan) return cmd_scan(sc, argv);
    if (*simc) return cmd_simulate(sim, argv);
    if (*replay) return cmd_replay(manifest);
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
    return kInputError;
  } catch (const EstimatorError& e) {
    spdlog::error("{}", e.what());
    return kEstimatorError;
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kInputError;
  }
  return kConfigError;
}

}  // namespace precip::cli
