#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

#include "precip/io.hpp"
#include "precip/manifest.hpp"
#include "precip/simulate.hpp"

using namespace precip;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Each case runs in its own scratch directory.
struct Scratch {
  fs::path dir;
  fs::path previous = fs::current_path();
  explicit Scratch(const std::string& name) {
    dir = fs::temp_directory_path() / ("precip_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::current_path(dir);
  }
  ~Scratch() { fs::current_path(previous); }
};

int run_precip(std::vector<std::string> args) {
  args.insert(args.begin(), "precip");
  return cli::run(args);
}

void write_file(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  std::vector<json> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(json::parse(line));
  return rows;
}

// Writes a periods file with the given totals, one-day periods six days apart.
void write_total_periods(const fs::path& path, const std::vector<double>& totals) {
  StationPeriods s{"synthetic", {}};
  Date day = parse_date("1980-01-01");
  for (double t : totals) {
    WetPeriod p;
    p.start_date = day;
    p.duration = 1;
    p.dailies = {t};
    p.total = t;
    p.max_daily = t;
    s.periods.push_back(p);
    day += std::chrono::days{6};
  }
  write_periods(path, {s});
}

}  // namespace

TEST_CASE("segment: five-day series gives two periods") {
  Scratch s("segment");
  write_file("five.csv", "date,precip_mm\n2000-01-01,0\n2000-01-02,1.2\n2000-01-03,3.4\n"
                         "2000-01-04,0\n2000-01-05,5.0\n");
  REQUIRE(run_precip({"segment", "--input", "five.csv", "--output", "periods.json"}) == cli::kOk);
  const auto periods = read_json("periods.json");
  REQUIRE(periods.size() == 2);
  CHECK(periods[0]["duration"] == 2);
  CHECK(periods[0]["station"] == "five");
  CHECK(periods[1]["total"] == 5.0);
  CHECK(fs::exists("periods.json.manifest.json"));
  const auto manifest = RunManifest::read("periods.json.manifest.json");
  CHECK(manifest.command == "segment");
  CHECK(manifest.inputs.at(0).sha256 == sha256_file("five.csv"));
  CHECK(manifest.outputs.at(0).sha256 == sha256_file("periods.json"));
}

TEST_CASE("segment: empty input exits with an input error") {
  Scratch s("empty");
  write_file("empty.csv", "");
  CHECK(run_precip({"segment", "--input", "empty.csv", "--output", "p.json"}) == cli::kInputError);
  CHECK(run_precip({"segment", "--input", "absent.csv", "--output", "p.json"}) == cli::kInputError);
}

TEST_CASE("segment: missing rows under the skip policy flag their periods") {
  Scratch s("skip");
  write_file("na.csv", "date,precip_mm\n2000-01-01,1\n2000-01-02,NA\n2000-01-03,2\n"
                       "2000-01-04,0\n2000-01-05,4\n");
  REQUIRE(run_precip({"segment", "--input", "na.csv", "--output", "p.csv", "--missing", "skip"}) ==
          cli::kOk);
  const auto stations = read_periods("p.csv");
  REQUIRE(stations.at(0).periods.size() == 2);
  CHECK(stations[0].periods[0].has_missing);
  CHECK(stations[0].periods[0].total == 3.0);
  CHECK_FALSE(stations[0].periods[1].has_missing);
  CHECK(run_precip({"segment", "--input", "na.csv", "--output", "p.csv", "--missing", "drop"}) ==
        cli::kConfigError);
}

TEST_CASE("fit: reports, tables and estimator failures") {
  Scratch s("fit");
  SyntheticSeriesSpec spec;
  spec.periods = 3000;
  const auto series = synthetic_series(spec, 4);
  write_periods("p.json", {{"synthetic", extract_wet_periods(series)}});

  REQUIRE(run_precip({"fit", "--input", "p.json", "--output", "nb.json", "--model", "negbin"}) ==
          cli::kOk);
  const auto nb = read_json("nb.json").at(0);
  CHECK(nb["model"] == "negbin");
  CHECK(nb["duration_shift"] == 1);
  CHECK(std::fabs(nb["params"]["r"].get<double>() - 0.85) < 0.1);
  CHECK(std::fabs(nb["params"]["p"].get<double>() - 0.3) < 0.03);

  REQUIRE(run_precip({"fit", "--input", "p.json", "--output", "t.csv", "--table"}) == cli::kOk);
  std::ifstream table("t.csv");
  std::string line;
  std::getline(table, line);
  CHECK(line.rfind("station,min_duration,sample_size,r,", 0) == 0);
  std::vector<int> thresholds;
  while (std::getline(table, line)) thresholds.push_back(std::stoi(line.substr(line.find(',') + 1)));
  CHECK(thresholds == std::vector<int>{1, 2, 3, 4, 6, 8, 10, 15});

  REQUIRE(run_precip({"fit", "--input", "p.json", "--output", "t7.json", "--table", "--durations",
                  "1,3,7"}) == cli::kOk);
  CHECK(read_json("t7.json").size() == 3);

  CHECK(run_precip({"fit", "--input", "p.json", "--output", "x.json", "--quantiles", "0.5,0.25,0.75"}) ==
        cli::kConfigError);
  CHECK(run_precip({"fit", "--input", "p.json", "--output", "x.json", "--model", "weibull"}) ==
        cli::kConfigError);

  // Equal durations have no overdispersion; r has no finite estimate.
  write_total_periods("flat.json", std::vector<double>(40, 2.0));
  CHECK(run_precip({"fit", "--input", "flat.json", "--output", "x.json", "--model", "negbin"}) ==
        cli::kEstimatorError);
}

TEST_CASE("test-daily: closed-form threshold routed through files") {
  Scratch s("daily");
  write_total_periods("p.json", {2.0, 0.5, 1.0});
  REQUIRE(run_precip({"test-daily", "--input", "p.json", "--output", "v.jsonl", "--thresholds",
                  "t.csv", "--r", "1", "--lambda", "1", "--gamma", "1", "--epsilon", "0.5"}) ==
          cli::kOk);
  const auto rows = read_jsonl("v.jsonl");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["threshold"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rows[0]["reject"] == true);
  CHECK(rows[1]["reject"] == false);
  CHECK(rows[2]["reject"] == false);
  CHECK(rows[0]["statistic"] == "daily_max");
  CHECK(fs::exists("t.csv"));
  CHECK(RunManifest::read("v.jsonl.manifest.json").outputs.size() == 2);

  CHECK(run_precip({"test-daily", "--input", "p.json", "--output", "v.jsonl", "--lambda", "1"}) ==
        cli::kConfigError);
}

TEST_CASE("scan: horizon, homogeneous input and a planted spike") {
  Scratch s("scan");
  write_total_periods("flat.json", std::vector<double>(200, 3.0));
  REQUIRE(run_precip({"scan", "--input", "flat.json", "--output", "flat.csv", "--r", "0.85"}) ==
          cli::kOk);
  std::ifstream flat("flat.csv");
  std::string line;
  std::getline(flat, line);
  CHECK(line == "station,period_index,start_date,volume,windows_containing,windows_flagged,class");
  std::size_t rows = 0;
  while (std::getline(flat, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "regular");
  }
  CHECK(rows == 200);
  // Onsets six days apart: a 30-day horizon is five periods.
  CHECK(RunManifest::read("flat.csv.manifest.json").parameters["resolved"]["synthetic"]["m"] == 5);

  auto totals = sample_gamma(GammaParams(0.85, 0.1), 1000, 12);
  double mean = 0.0;
  for (double t : totals) mean += t / static_cast<double>(totals.size());
  totals[400] = 100.0 * mean;
  write_total_periods("spike.json", totals);
  for (const char* eps : {"0.05", "0.01"}) {
    REQUIRE(run_precip({"scan", "--input", "spike.json", "--output", "spike.jsonl", "--r", "0.85",
                    "--m", "5", "--epsilon", eps}) == cli::kOk);
    const auto verdicts = read_jsonl("spike.jsonl");
    CHECK(verdicts.at(400)["class"] == "absolute");
    CHECK(verdicts.at(400)["windows_flagged"] == 5);
  }
  CHECK(run_precip({"scan", "--input", "spike.json", "--output", "x.csv", "--m", "5",
                "--horizon-days", "30"}) == cli::kConfigError);
}

TEST_CASE("simulate: configs and errors") {
  Scratch s("simulate");
  write_file("frechet.json",
             R"({"experiment": "frechet", "r1": 0.85, "c": 0.05, "gamma": 2, "m_grid": [1, 16, 1024]})");
  REQUIRE(run_precip({"simulate", "--config", "frechet.json", "--output", "f.json"}) == cli::kOk);
  const auto f = read_json("f.json");
  REQUIRE(f.size() == 3);
  CHECK(f[2]["distance"].get<double>() < f[0]["distance"].get<double>());

  write_file("cal.json", R"({"experiment": "calibration", "statistic": "SR0", "m": 2, "r": 1,
                             "epsilon": [0.5], "trials": 20000})");
  REQUIRE(run_precip({"simulate", "--config", "cal.json", "--output", "c.csv", "--threads", "2"}) ==
          cli::kOk);

  write_file("bad.json", R"({"experiment": "lln", "n_grid": [10], "daily": {"law": "pareto", "tail_index": 0.9}})");
  CHECK(run_precip({"simulate", "--config", "bad.json", "--output", "x.csv"}) == cli::kConfigError);
  write_file("unknown.json", R"({"experiment": "bootstrap"})");
  CHECK(run_precip({"simulate", "--config", "unknown.json", "--output", "x.csv"}) == cli::kConfigError);
  write_file("broken.json", "{");
  CHECK(run_precip({"simulate", "--config", "broken.json", "--output", "x.csv"}) == cli::kConfigError);
}

TEST_CASE("replay reproduces outputs bit for bit") {
  Scratch s("replay");
  write_file("series.json", R"({"experiment": "series", "periods": 500})");
  REQUIRE(run_precip({"simulate", "--config", "series.json", "--output", "daily.csv", "--seed", "9"}) ==
          cli::kOk);
  REQUIRE(run_precip({"segment", "--input", "daily.csv", "--output", "p.json"}) == cli::kOk);
  REQUIRE(run_precip({"scan", "--input", "p.json", "--output", "v.csv"}) == cli::kOk);
  write_file("lln.json", R"({"experiment": "lln", "n_grid": [10, 100], "trials": 5000,
                             "daily": {"law": "exponential", "mean": 2}})");
  REQUIRE(run_precip({"simulate", "--config", "lln.json", "--output", "lln.csv"}) == cli::kOk);

  for (const char* m : {"daily.csv.manifest.json", "p.json.manifest.json", "v.csv.manifest.json",
                        "lln.csv.manifest.json"}) {
    CHECK(run_precip({"replay", m}) == cli::kOk);
  }
  // A changed input changes the output.
  write_file("lln.json", R"({"experiment": "lln", "n_grid": [10, 100], "trials": 5000, "seed": 1,
                             "daily": {"law": "exponential", "mean": 2}})");
  CHECK(run_precip({"replay", "lln.csv.manifest.json"}) == cli::kMismatch);
}

TEST_CASE("command-line errors") {
  CHECK(run_precip({}) == cli::kConfigError);
  CHECK(run_precip({"segment"}) == cli::kConfigError);
  CHECK(run_precip({"frobnicate"}) == cli::kConfigError);
  CHECK(run_precip({"--version"}) == cli::kOk);
}
