#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace precip {

enum class WindowClass { regular, relative, intermediate, absolute };
enum class TargetMode { fixed_coordinate, window_max };

std::string to_string(WindowClass cls);
std::string to_string(TargetMode mode);
TargetMode parse_target_mode(std::string_view text);

/// Classification of one period from the sliding SR0 scan.
struct WindowVerdict {
  std::size_t period_index = 0;
  int windows_containing = 0;
  int windows_flagged = 0;
  WindowClass cls = WindowClass::regular;
};

struct ScanOptions {
  std::size_t m = 5;
  double r = 1.0;
  double epsilon = 0.05;
  TargetMode target = TargetMode::window_max;
  unsigned threads = 1;
};

/// Strongest class for a period flagged in `flagged` of its `containing` windows:
/// absolute when flagged in all of them, intermediate when flagged in at least
/// ceil(containing / 2), relative when flagged at least once.
WindowClass classify(int containing, int flagged);

/// Runs the SR0 test on every window of width m and classifies each period.
///
/// In window_max mode each window tests (and can flag) only its largest total;
/// in fixed_coordinate mode every member of the window is tested. Periods near
/// the ends belong to fewer than m windows and are classified relative to that
/// count. The result does not depend on `threads`.
std::vector<WindowVerdict> moving_scan(std::span<const double> volumes, const ScanOptions& options);

/// Nested class counts: absolute <= intermediate <= relative.
struct ScanSummary {
  std::size_t relative = 0;
  std::size_t intermediate = 0;
  std::size_t absolute = 0;
};

ScanSummary summarize(std::span<const WindowVerdict> verdicts);

/// Window width matching a calendar horizon: round(days / mean_gap), at least 2.
std::size_t horizon_to_m(int days, double mean_gap);

}  // namespace precip
