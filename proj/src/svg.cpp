#include "bmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bmc::svg {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 560.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string pow10_label(int k) {
  char buf[32];
  if (k >= -3 && k <= 3) {
    std::snprintf(buf, sizeof(buf), "%g", std::pow(10.0, k));
  } else {
    std::snprintf(buf, sizeof(buf), "1e%d", k);
  }
  return buf;
}

}  // namespace

void write_loglog_plot(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series,
                       const std::vector<FitLine>& fits) {
  double lx_min = std::numeric_limits<double>::infinity();
  double lx_max = -lx_min;
  double ly_min = lx_min;
  double ly_max = -lx_min;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      lx_min = std::min(lx_min, std::log10(x));
      lx_max = std::max(lx_max, std::log10(x));
      ly_min = std::min(ly_min, std::log10(y));
      ly_max = std::max(ly_max, std::log10(y));
    }
  }
  if (!(lx_min <= lx_max) || !(ly_min <= ly_max)) {
    throw std::invalid_argument("write_loglog_plot: no positive data");
  }
  lx_min = std::floor(lx_min - 0.02);
  lx_max = std::ceil(lx_max + 0.02);
  ly_min = std::floor(ly_min - 0.02);
  ly_max = std::ceil(ly_max + 0.02);

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const auto px = [&](double lx) {
    return kMarginL + (lx - lx_min) / (lx_max - lx_min) * plot_w;
  };
  const auto py = [&](double ly) {
    return kMarginT + (ly_max - ly) / (ly_max - ly_min) * plot_h;
  };

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // frame
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade grid and tick labels
  for (int k = static_cast<int>(lx_min); k <= static_cast<int>(lx_max); ++k) {
    const double x = px(k);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << kMarginT << "\" x2=\""
        << num(x) << "\" y2=\"" << kMarginT + plot_h
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << kMarginT + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" << pow10_label(k) << "</text>\n";
  }
  for (int k = static_cast<int>(ly_min); k <= static_cast<int>(ly_max); ++k) {
    const double y = py(k);
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << num(y) << "\" x2=\""
        << kMarginL + plot_w << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" << pow10_label(k) << "</text>\n";
  }
  out << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginT + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" transform=\"rotate(-90 18 "
      << kMarginT + plot_h / 2 << ")\">" << y_label << "</text>\n";

  for (const FitLine& f : fits) {
    const double lx0 = std::log10(f.x_lo);
    const double lx1 = std::log10(f.x_hi);
    const double ly0 = f.intercept + f.slope * lx0;
    const double ly1 = f.intercept + f.slope * lx1;
    out << "<line x1=\"" << num(px(lx0)) << "\" y1=\"" << num(py(ly0))
        << "\" x2=\"" << num(px(lx1)) << "\" y2=\"" << num(py(ly1))
        << "\" stroke=\"" << f.color
        << "\" stroke-width=\"1.5\" stroke-dasharray=\"2,4\"/>\n";
  }

  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      out << "<circle cx=\"" << num(px(std::log10(x))) << "\" cy=\""
          << num(py(std::log10(y))) << "\" r=\"4\" ";
      if (s.filled) {
        out << "fill=\"" << s.color << "\"/>\n";
      } else {
        out << "fill=\"white\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n";
      }
    }
  }

  // legend
  double ly_pos = kMarginT + 14.0;
  const double lx_pos = kMarginL + plot_w - 240.0;
  for (const Series& s : series) {
    out << "<circle cx=\"" << lx_pos << "\" cy=\"" << ly_pos - 4 << "\" r=\"4\" ";
    if (s.filled) {
      out << "fill=\"" << s.color << "\"/>";
    } else {
      out << "fill=\"white\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>";
    }
    out << "<text x=\"" << lx_pos + 10 << "\" y=\"" << ly_pos
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
    ly_pos += 16.0;
  }
  for (const FitLine& f : fits) {
    out << "<line x1=\"" << lx_pos - 6 << "\" y1=\"" << ly_pos - 4 << "\" x2=\""
        << lx_pos + 6 << "\" y2=\"" << ly_pos - 4 << "\" stroke=\"" << f.color
        << "\" stroke-dasharray=\"2,4\"/>"
        << "<text x=\"" << lx_pos + 10 << "\" y=\"" << ly_pos
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << f.label
        << "</text>\n";
    ly_pos += 16.0;
  }

  out << "</svg>\n";
}

}  // namespace bmc::svg
