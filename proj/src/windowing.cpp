#include "precip/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "precip/anomaly_tests.hpp"
#include "precip/errors.hpp"

namespace precip {

std::string to_string(WindowClass cls) {
  switch (cls) {
    case WindowClass::regular: return "regular";
    case WindowClass::relative: return "relative";
    case WindowClass::intermediate: return "intermediate";
    case WindowClass::absolute: return "absolute";
  }
  return "unknown";
}

std::string to_string(TargetMode mode) {
  return mode == TargetMode::window_max ? "max" : "fixed";
}

TargetMode parse_target_mode(std::string_view text) {
  if (text == "max" || text == "window_max") return TargetMode::window_max;
  if (text == "fixed" || text == "fixed_coordinate") return TargetMode::fixed_coordinate;
  throw ConfigError("unknown target mode '" + std::string(text) + "'");
}

WindowClass classify(int containing, int flagged) {
  if (flagged <= 0) return WindowClass::regular;
  if (flagged >= containing) return WindowClass::absolute;
  if (flagged >= (containing + 1) / 2) return WindowClass::intermediate;
  return WindowClass::relative;
}

std::vector<WindowVerdict> moving_scan(std::span<const double> volumes, const ScanOptions& options) {
  const std::size_t n = volumes.size();
  const std::size_t m = options.m;
  if (m < 2) throw ConfigError("window width must be at least 2");
  if (n < m) {
    throw InputError("need at least m = " + std::to_string(m) + " periods for the scan (got " +
                     std::to_string(n) + ")");
  }
  for (const double v : volumes) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("period totals must be nonnegative");
  }
  const double threshold = sr0_threshold(m, options.r, options.epsilon);
  const std::size_t windows = n - m + 1;

  // flags[w * m + i] marks member i of window w as rejected.
  std::vector<unsigned char> flags(windows * m, 0);
  const auto scan_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t w = first; w < last; ++w) {
      const auto window = volumes.subspan(w, m);
      if (options.target == TargetMode::window_max) {
        const std::size_t top = argmax_volume(window);
        flags[w * m + top] = sr0_statistic(window, top) > threshold;
      } else {
        for (std::size_t i = 0; i < m; ++i) flags[w * m + i] = sr0_statistic(window, i) > threshold;
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, windows));
  if (threads == 1) {
    scan_range(0, windows);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (windows + threads - 1) / threads;
    for (std::size_t first = 0; first < windows; first += chunk) {
      pool.emplace_back(scan_range, first, std::min(windows, first + chunk));
    }
  }

  std::vector<WindowVerdict> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t first = j + 1 >= m ? j + 1 - m : 0;
    const std::size_t last = std::min(j, windows - 1);
    WindowVerdict& v = out[j];
    v.period_index = j;
    v.windows_containing = static_cast<int>(last - first + 1);
    for (std::size_t w = first; w <= last; ++w) v.windows_flagged += flags[w * m + (j - w)];
    v.cls = classify(v.windows_containing, v.windows_flagged);
  }
  return out;
}

ScanSummary summarize(std::span<const WindowVerdict> verdicts) {
  ScanSummary s;
  for (const auto& v : verdicts) {
    if (v.cls == WindowClass::regular) continue;
    ++s.relative;
    if (v.cls == WindowClass::intermediate || v.cls == WindowClass::absolute) ++s.intermediate;
    if (v.cls == WindowClass::absolute) ++s.absolute;
  }
  return s;
}

std::size_t horizon_to_m(int days, double mean_gap) {
  if (days <= 0) throw ConfigError("horizon must be a positive number of days");
  if (!(mean_gap > 0.0)) throw ConfigError("mean onset gap must be positive");
  const auto m = static_cast<long long>(std::llround(static_cast<double>(days) / mean_gap));
  return static_cast<std::size_t>(std::max(2LL, m));
}

}  // namespace precip
