#include "bmc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bmc::csv {

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return out;
}

void write_comments(std::ofstream& out,
                    const std::vector<std::string>& comments) {
  for (const std::string& line : comments) {
    out << "# " << line << "\n";
  }
}

}  // namespace

void write_solve_csv(const std::string& path,
                     const std::vector<std::string>& header_comments,
                     const std::vector<SolveRow>& rows) {
  auto out = open_out(path);
  write_comments(out, header_comments);
  out << "x,estimate,std_error,analytic,rel_error\n";
  for (const SolveRow& r : rows) {
    out << format(r.x) << ',' << format(r.estimate) << ','
        << (r.std_error ? format(*r.std_error) : std::string()) << ','
        << format(r.analytic) << ',' << format(r.rel_error) << '\n';
  }
}

void write_sweep_csv(const std::string& path,
                     const std::vector<std::string>& header_comments,
                     const std::vector<SweepCsvRow>& rows) {
  auto out = open_out(path);
  write_comments(out, header_comments);
  out << "param,method,scheme,epsilon,std_error,seconds\n";
  for (const SweepCsvRow& r : rows) {
    out << format(r.param) << ',' << r.method << ',' << r.scheme << ','
        << format(r.epsilon) << ',' << format(r.std_error) << ','
        << format(r.seconds) << '\n';
  }
}

void write_fit_csv(const std::string& path,
                   const std::vector<std::string>& header_comments,
                   const std::vector<FitCsvRow>& rows) {
  auto out = open_out(path);
  write_comments(out, header_comments);
  out << "method,scheme,slope,intercept,points_used,excluded\n";
  for (const FitCsvRow& r : rows) {
    out << r.method << ',' << r.scheme << ',' << format(r.slope) << ','
        << format(r.intercept) << ',' << r.points_used << ','
        << (r.excluded.empty() ? "-" : r.excluded) << '\n';
  }
}

}  // namespace bmc::csv
