#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "precip/anomaly_tests.hpp"
#include "precip/distributions.hpp"
#include "precip/errors.hpp"
#include "precip/fitting.hpp"
#include "precip/io.hpp"
#include "precip/special.hpp"
#include "precip/segmentation.hpp"
#include "precip/simulate.hpp"
#include "precip/windowing.hpp"

namespace py = pybind11;
using namespace precip;

namespace {

py::array_t<double> to_array(std::vector<double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<std::int64_t> to_array(std::vector<std::int64_t> v) {
  py::array_t<std::int64_t> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

DailySeries make_series(const std::vector<std::string>& dates,
                        const std::vector<std::optional<double>>& precip, const std::string& station) {
  if (dates.size() != precip.size()) throw InputError("dates and precip differ in length");
  DailySeries s;
  s.station = station;
  s.records.reserve(dates.size());
  for (std::size_t i = 0; i < dates.size(); ++i) s.records.push_back({parse_date(dates[i]), precip[i]});
  return s;
}

Statistic parse_statistic(const std::string& name) {
  if (name == "SR") return Statistic::sr;
  if (name == "SR0") return Statistic::sr0;
  if (name == "SR0_group") return Statistic::sr0_group;
  throw ConfigError("unknown statistic '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_precipext, m) {
  m.doc() = "Wet-period segmentation, model fitting and precipitation anomaly tests";

  auto base = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<EstimatorError>(m, "EstimatorError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  (void)base;

  // --- parameter types ---
  py::class_<TemperedSFParams>(m, "TemperedSFParams")
      .def(py::init<double, double, double>(), py::arg("r"), py::arg("lambda_"), py::arg("gamma"))
      .def_readonly("r", &TemperedSFParams::r)
      .def_readonly("lambda_", &TemperedSFParams::lambda)
      .def_readonly("gamma", &TemperedSFParams::gamma)
      .def("__repr__", [](const TemperedSFParams& p) {
        return "TemperedSFParams(r=" + format_number(p.r) + ", lambda_=" + format_number(p.lambda) +
               ", gamma=" + format_number(p.gamma) + ")";
      });
  py::class_<NegBinParams>(m, "NegBinParams")
      .def(py::init<double, double>(), py::arg("r"), py::arg("p"))
      .def_readonly("r", &NegBinParams::r)
      .def_readonly("p", &NegBinParams::p)
      .def("__repr__", [](const NegBinParams& p) {
        return "NegBinParams(r=" + format_number(p.r) + ", p=" + format_number(p.p) + ")";
      });
  py::class_<GammaParams>(m, "GammaParams")
      .def(py::init<double, double>(), py::arg("shape"), py::arg("rate"))
      .def_readonly("shape", &GammaParams::shape)
      .def_readonly("rate", &GammaParams::rate)
      .def("__repr__", [](const GammaParams& p) {
        return "GammaParams(shape=" + format_number(p.shape) + ", rate=" + format_number(p.rate) + ")";
      });
  py::class_<SFParams>(m, "SFParams")
      .def(py::init<double, double>(), py::arg("k"), py::arg("r"))
      .def_readonly("k", &SFParams::k)
      .def_readonly("r", &SFParams::r);
  py::class_<BetaParams>(m, "BetaParams", "Density proportional to (1 - x)^(k-1) x^(r-1).")
      .def(py::init<double, double>(), py::arg("k"), py::arg("r"))
      .def_readonly("k", &BetaParams::k)
      .def_readonly("r", &BetaParams::r);

  // --- distributions ---
  m.def("tempered_sf_cdf", &tempered_sf_cdf, py::arg("params"), py::arg("x"));
  m.def("tempered_sf_quantile", &tempered_sf_quantile, py::arg("params"), py::arg("p"));
  m.def("tempered_sf_pdf", &tempered_sf_pdf, py::arg("params"), py::arg("x"));
  m.def("sf_cdf", &sf_cdf, py::arg("params"), py::arg("x"));
  m.def("sf_quantile", &sf_quantile, py::arg("params"), py::arg("p"));
  m.def("beta_cdf", &beta_cdf, py::arg("params"), py::arg("x"));
  m.def("beta_quantile", &beta_quantile, py::arg("params"), py::arg("p"));
  m.def("gamma_cdf", &gamma_cdf, py::arg("params"), py::arg("x"));
  m.def("gamma_quantile", &gamma_quantile, py::arg("params"), py::arg("p"));
  m.def("negbin_pmf", &negbin_pmf, py::arg("params"), py::arg("n"));
  m.def("negbin_cdf", &negbin_cdf, py::arg("params"), py::arg("n"));
  m.def("regularized_incomplete_beta", &regularized_incomplete_beta, py::arg("a"), py::arg("b"),
        py::arg("x"));
  m.def(
      "sample_tempered_sf",
      [](const TemperedSFParams& p, std::size_t n, std::uint64_t seed) {
        return to_array(sample_tempered_sf(p, n, seed));
      },
      py::arg("params"), py::arg("n"), py::arg("seed") = 0);
  m.def(
      "sample_gamma",
      [](const GammaParams& p, std::size_t n, std::uint64_t seed) { return to_array(sample_gamma(p, n, seed)); },
      py::arg("params"), py::arg("n"), py::arg("seed") = 0);
  m.def(
      "sample_negbin",
      [](const NegBinParams& p, std::size_t n, std::uint64_t seed) { return to_array(sample_negbin(p, n, seed)); },
      py::arg("params"), py::arg("n"), py::arg("seed") = 0);

  // --- segmentation ---
  py::class_<WetPeriod>(m, "WetPeriod")
      .def_property_readonly("start_date", [](const WetPeriod& p) { return format_date(p.start_date); })
      .def_readonly("duration", &WetPeriod::duration)
      .def_readonly("dailies", &WetPeriod::dailies)
      .def_readonly("total", &WetPeriod::total)
      .def_readonly("max_daily", &WetPeriod::max_daily)
      .def_readonly("has_missing", &WetPeriod::has_missing)
      .def("__repr__", [](const WetPeriod& p) {
        return "WetPeriod(start_date='" + format_date(p.start_date) +
               "', duration=" + std::to_string(p.duration) + ", total=" + format_number(p.total) + ")";
      });
  m.def(
      "extract_wet_periods",
      [](const std::vector<std::string>& dates, const std::vector<std::optional<double>>& precip,
         double threshold, const std::string& missing) {
        return extract_wet_periods(make_series(dates, precip, ""), threshold, parse_missing_policy(missing));
      },
      py::arg("dates"), py::arg("precip"), py::arg("threshold") = 0.0, py::arg("missing") = "break",
      "Wet periods of a daily series. Dates are ISO strings; None marks a missing day.");
  m.def(
      "segment_csv",
      [](const std::string& path, double threshold, const std::string& missing) {
        std::vector<std::pair<std::string, std::vector<WetPeriod>>> out;
        const auto policy = parse_missing_policy(missing);
        for (const auto& s : read_daily_csv(std::filesystem::path(path))) {
          out.emplace_back(s.station, extract_wet_periods(s, threshold, policy));
        }
        return out;
      },
      py::arg("path"), py::arg("threshold") = 0.0, py::arg("missing") = "break",
      "List of (station, periods) for a daily CSV file.");
  m.def("mean_inter_onset_gap",
        [](const std::vector<WetPeriod>& periods) { return mean_inter_onset_gap(periods); },
        py::arg("periods"));

  // --- fitting ---
  m.def(
      "fit_negbin", [](const std::vector<int>& durations) { return fit_negbin(durations).params; },
      py::arg("durations"), "Maximum-likelihood fit of durations, shifted to counts duration - 1.");
  m.def(
      "fit_tempered_sf_quantile",
      [](const std::vector<double>& maxima, double r, const QuantileOrders& orders) {
        return fit_tempered_sf_quantile(maxima, r, orders);
      },
      py::arg("maxima"), py::arg("r"), py::arg("orders") = kDefaultQuantileOrders);
  m.def(
      "fit_tempered_sf_ls",
      [](const std::vector<double>& maxima, double r) { return fit_tempered_sf_ls(maxima, r); },
      py::arg("maxima"), py::arg("r"));
  m.def(
      "fit_gamma_totals",
      [](const std::vector<double>& totals) { return fit_gamma_totals(totals).params; },
      py::arg("totals"));
  m.def(
      "tempered_sf_discrepancy",
      [](const std::vector<double>& sample, const TemperedSFParams& params) {
        return sup_discrepancy(sample, [&](double x) { return tempered_sf_cdf(params, x); });
      },
      py::arg("sample"), py::arg("params"), "Kolmogorov-Smirnov distance to a tempered SF law.");
  m.def(
      "censor_and_collect_maxima",
      [](const std::vector<WetPeriod>& periods, int min_duration) {
        return censor_and_collect_maxima(periods, min_duration);
      },
      py::arg("periods"), py::arg("min_duration"));

  // --- anomaly tests ---
  py::class_<TestVerdict>(m, "TestVerdict")
      .def_property_readonly("statistic", [](const TestVerdict& v) { return to_string(v.statistic); })
      .def_readonly("value", &TestVerdict::value)
      .def_readonly("threshold", &TestVerdict::threshold)
      .def_readonly("epsilon", &TestVerdict::epsilon)
      .def_readonly("reject", &TestVerdict::reject)
      .def("__repr__", [](const TestVerdict& v) {
        return "TestVerdict(" + to_string(v.statistic) + ", value=" + format_number(v.value) +
               ", threshold=" + format_number(v.threshold) + ", reject=" + (v.reject ? "True" : "False") + ")";
      });
  m.def("daily_max_test", &daily_max_test, py::arg("x_max"), py::arg("params"), py::arg("epsilon"));
  m.def(
      "sr_test",
      [](const std::vector<double>& v, std::size_t t, double r, double eps) { return sr_test(v, t, r, eps); },
      py::arg("volumes"), py::arg("target_index"), py::arg("r"), py::arg("epsilon"));
  m.def(
      "sr0_test",
      [](const std::vector<double>& v, std::size_t t, double r, double eps) { return sr0_test(v, t, r, eps); },
      py::arg("volumes"), py::arg("target_index"), py::arg("r"), py::arg("epsilon"));
  m.def(
      "sr0_group_test",
      [](const std::vector<double>& v, const std::vector<std::size_t>& subset, double r, double eps) {
        return sr0_group_test(v, subset, r, eps);
      },
      py::arg("volumes"), py::arg("subset"), py::arg("r"), py::arg("epsilon"));
  m.def("sr_threshold", &sr_threshold, py::arg("m"), py::arg("r"), py::arg("epsilon"));
  m.def("sr0_threshold", &sr0_threshold, py::arg("m"), py::arg("r"), py::arg("epsilon"));
  m.def("sr0_group_threshold", &sr0_group_threshold, py::arg("m"), py::arg("l"), py::arg("r"),
        py::arg("epsilon"));

  // --- windowing ---
  py::class_<WindowVerdict>(m, "WindowVerdict")
      .def_readonly("period_index", &WindowVerdict::period_index)
      .def_readonly("windows_containing", &WindowVerdict::windows_containing)
      .def_readonly("windows_flagged", &WindowVerdict::windows_flagged)
      .def_property_readonly("cls", [](const WindowVerdict& v) { return to_string(v.cls); })
      .def("__repr__", [](const WindowVerdict& v) {
        return "WindowVerdict(" + std::to_string(v.period_index) + ", " + to_string(v.cls) + ", " +
               std::to_string(v.windows_flagged) + "/" + std::to_string(v.windows_containing) + ")";
      });
  m.def(
      "moving_scan",
      [](const std::vector<double>& volumes, std::size_t window, double r, double epsilon,
         const std::string& target, unsigned threads) {
        ScanOptions opt;
        opt.m = window;
        opt.r = r;
        opt.epsilon = epsilon;
        opt.target = parse_target_mode(target);
        opt.threads = threads;
        py::gil_scoped_release release;
        return moving_scan(volumes, opt);
      },
      py::arg("volumes"), py::arg("m"), py::arg("r"), py::arg("epsilon") = 0.05,
      py::arg("target") = "max", py::arg("threads") = 1);
  m.def("horizon_to_m", &horizon_to_m, py::arg("days"), py::arg("mean_gap"));

  // --- simulation ---
  m.def(
      "verify_frechet_limit",
      [](double r1, double c, double gamma, const std::vector<std::int64_t>& grid) {
        std::vector<std::pair<std::int64_t, double>> out;
        for (const auto& p : verify_frechet_limit(r1, c, gamma, grid)) out.emplace_back(p.m, p.distance);
        return out;
      },
      py::arg("r1"), py::arg("c"), py::arg("gamma"), py::arg("m_grid"));
  m.def(
      "verify_lln_negbin_sums",
      [](double r, double mu, double q, const std::string& law, double mean, double shape,
         double tail_index, double correlation, const std::vector<std::int64_t>& grid,
         std::size_t trials, std::uint64_t seed, unsigned threads) {
        DailyLaw d;
        d.kind = parse_daily_law(law);
        d.mean = mean;
        d.shape = law == "exponential" ? 1.0 : shape;
        d.tail_index = tail_index;
        d.correlation = correlation;
        py::gil_scoped_release release;
        std::vector<std::tuple<std::int64_t, double, double>> out;
        for (const auto& p : verify_lln_negbin_sums(r, mu, q, d, grid, trials, seed, threads)) {
          out.emplace_back(p.n, p.p, p.ks);
        }
        return out;
      },
      py::arg("r"), py::arg("mu"), py::arg("q") = 0.5, py::arg("law") = "exponential",
      py::arg("mean") = 1.0, py::arg("shape") = 1.0, py::arg("tail_index") = 3.0,
      py::arg("correlation") = 0.5, py::arg("n_grid") = std::vector<std::int64_t>{100, 1000},
      py::arg("trials") = 10000, py::arg("seed") = 0, py::arg("threads") = 1,
      "List of (n, p_n, KS distance to the gamma limit).");
  m.def(
      "calibrate_test",
      [](const std::string& statistic, std::size_t window, std::size_t l, double r, double eps,
         std::size_t trials, std::uint64_t seed, unsigned threads) {
        const auto stat = parse_statistic(statistic);
        py::gil_scoped_release release;
        const auto c = calibrate_test(stat, window, l, r, eps, trials, seed, threads);
        return std::make_tuple(c.rate, c.standard_error, c.threshold);
      },
      py::arg("statistic"), py::arg("m"), py::arg("l") = 1, py::arg("r") = 0.85,
      py::arg("epsilon") = 0.05, py::arg("trials") = 10000, py::arg("seed") = 0,
      py::arg("threads") = 1, "Tuple (rejection rate, standard error at epsilon, threshold).");

  m.attr("__version__") = "0.3.0";
}
