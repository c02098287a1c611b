#pragma once

#include <string>
#include <vector>

namespace bmc::svg {

struct Series {
  std::string label;
  std::string color;  // e.g. "#1f77b4"
  bool filled = true;
  std::vector<std::pair<double, double>> points;  // (param, eps), both > 0
};

struct FitLine {
  std::string label;
  std::string color;
  double slope = 0.0;      // in log10-log10 space
  double intercept = 0.0;
  double x_lo = 0.0;       // param range the fit covers
  double x_hi = 0.0;
};

/// Self-contained log-log scatter plot with dotted least-square fit lines
/// and decade tick marks.  No external assets.
void write_loglog_plot(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series,
                       const std::vector<FitLine>& fits);

}  // namespace bmc::svg
