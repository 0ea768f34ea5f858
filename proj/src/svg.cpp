#include "bpg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bpg/common.hpp"

namespace bpg {

namespace {

constexpr double kFloor = 1e-16;
constexpr int kW = 960, kH = 600;
constexpr int kL = 70, kR = 170, kT = 40, kB = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

} // namespace

std::string series_color(int idx) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};
  return palette[idx % 8];
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series) {
  double xmax = 1.0;
  double ymin_log = 0.0, ymax_log = 1.0;
  bool any = false, clamped = false;
  for (const auto& s : series)
    for (size_t t = 0; t < s.x.size(); ++t) {
      double y = s.y[t];
      if (!(y > 0.0) || y < kFloor) {
        y = kFloor;
        clamped = true;
      }
      const double ly = std::log10(y);
      if (!any) {
        ymin_log = ymax_log = ly;
        any = true;
      }
      ymin_log = std::min(ymin_log, ly);
      ymax_log = std::max(ymax_log, ly);
      xmax = std::max(xmax, s.x[t]);
    }
  ymin_log = std::floor(ymin_log);
  ymax_log = std::ceil(ymax_log);
  if (ymax_log - ymin_log < 1.0) ymax_log = ymin_log + 1.0;

  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto px = [&](double x) { return kL + pw * (x / xmax); };
  auto py = [&](double y) {
    double v = !(y > 0.0) || y < kFloor ? kFloor : y;
    return kT + ph * (1.0 - (std::log10(v) - ymin_log) / (ymax_log - ymin_log));
  };

  std::ofstream out(path);
  if (!out) throw Error("write_svg_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kL << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // axes
  out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
      << kT + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kL << "\" y1=\"" << kT + ph << "\" x2=\"" << kL + pw << "\" y2=\""
      << kT + ph << "\" stroke=\"black\"/>\n";

  // y decade grid
  for (int d = static_cast<int>(ymin_log); d <= static_cast<int>(ymax_log); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << kL << "\" y1=\"" << fmt(y) << "\" x2=\"" << kL + pw
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kL - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
        << "</text>\n";
  }
  // x ticks: about 10
  const int xtick = std::max(1, static_cast<int>(xmax) / 10);
  for (int x = 0; x <= static_cast<int>(xmax); x += xtick) {
    out << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << kT + ph << "\" x2=\"" << fmt(px(x))
        << "\" y2=\"" << kT + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kT + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << x
        << "</text>\n";
  }
  out << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">step</text>\n";

  for (const auto& s : series) {
    if (s.x.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\"";
    if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << "\"";
    out << " stroke-width=\"1.5\" points=\"";
    for (size_t t = 0; t < s.x.size(); ++t) {
      if (t) out << " ";
      out << fmt(px(s.x[t])) << "," << fmt(py(s.y[t]));
    }
    out << "\"/>\n";
  }

  // legend
  int ly = kT + 10;
  for (const auto& s : series) {
    out << "<line x1=\"" << kL + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kL + pw + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << "\"";
    out << "/>\n";
    out << "<text x=\"" << kL + pw + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    ly += 16;
  }
  if (clamped)
    out << "<text x=\"" << kL + 4 << "\" y=\"" << kT + ph - 6
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#888888\">values below 1e-16 "
           "clamped</text>\n";
  out << "</svg>\n";
}

} // namespace bpg
