#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bmc::csv {

/// Floating point rendered with 17 significant digits, enough to round-trip
/// a double exactly.
std::string format(double v);

struct SolveRow {
  double x = 0.0;
  double estimate = 0.0;
  std::optional<double> std_error;  // blank for the forward method
  double analytic = 0.0;
  double rel_error = 0.0;
};

/// '#'-prefixed comment header lines followed by the column row.
void write_solve_csv(const std::string& path,
                     const std::vector<std::string>& header_comments,
                     const std::vector<SolveRow>& rows);

struct SweepCsvRow {
  double param = 0.0;
  std::string method;
  std::string scheme;
  double epsilon = 0.0;
  double std_error = 0.0;
  double seconds = 0.0;
};

void write_sweep_csv(const std::string& path,
                     const std::vector<std::string>& header_comments,
                     const std::vector<SweepCsvRow>& rows);

struct FitCsvRow {
  std::string method;
  std::string scheme;
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  std::string excluded;  // semicolon-joined excluded param values, or "-"
};

void write_fit_csv(const std::string& path,
                   const std::vector<std::string>& header_comments,
                   const std::vector<FitCsvRow>& rows);

}  // namespace bmc::csv
