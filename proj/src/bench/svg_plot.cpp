#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "vie/bench.hpp"

namespace vie::bench {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr double kMinPlotted = 1e-17;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, log10 error)
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(Family family, std::span<const ErrorRecord> records) {
  std::string x_label;
  std::string title;
  std::map<int, Series> groups;
  for (const auto& r : records) {
    int key = 0;
    double x = 0.0;
    switch (family) {
      case Family::ErrorVsM: key = r.Mc; x = r.M; break;
      case Family::ErrorVsK: key = r.Mc; x = r.k; break;
      case Family::ErrorVsMc: key = r.k; x = r.Mc; break;
      case Family::Single: key = r.Mc; x = r.k; break;
    }
    auto& s = groups[key];
    if (s.label.empty()) s.label = (family == Family::ErrorVsMc ? "k=" : "Mc=") + std::to_string(key);
    const double err = std::isfinite(r.linf_error) ? std::max(r.linf_error, kMinPlotted) : kMinPlotted;
    s.points.emplace_back(x, std::log10(err));
  }
  const ErrorRecord* first = records.empty() ? nullptr : &records.front();
  const std::string setup = first ? "N=" + std::to_string(first->N) + ", T=" + fmt(first->T) : "";
  switch (family) {
    case Family::ErrorVsM:
      x_label = "M";
      title = "L∞-errors versus fine degree M (" + setup + ")";
      break;
    case Family::ErrorVsK:
      x_label = "k";
      title = "L∞-errors versus iteration number k (M=" + std::to_string(first ? first->M : 0) + ", " + setup + ")";
      break;
    case Family::ErrorVsMc:
      x_label = "Mc";
      title = "L∞-errors versus coarse degree Mc (M=" + std::to_string(first ? first->M : 0) + ", " + setup + ")";
      break;
    case Family::Single:
      x_label = "k";
      title = "L∞-errors versus iteration number k (" + setup + ")";
      break;
  }

  double xmin = 0, xmax = 1, ymin = -16, ymax = 0;
  bool any = false;
  for (const auto& [key, s] : groups) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";

  const int decades = static_cast<int>(ymax - ymin);
  const int ystep = std::max(1, decades / 10);
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); d += ystep) {
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << fmt(py(d)) << "\" y2=\"" << fmt(py(d))
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(d) + 4) << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  const int xspan = static_cast<int>(std::ceil(xmax - xmin));
  const int xstep = std::max(1, xspan / 10);
  for (int x = static_cast<int>(std::ceil(xmin)); x <= static_cast<int>(xmax); x += xstep) {
    svg << "<line x1=\"" << fmt(px(x)) << "\" x2=\"" << fmt(px(x)) << "\" y1=\"" << kTop << "\" y2=\"" << kTop + ph
        << "\" stroke=\"#eee\"/>\n";
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  svg << "<text transform=\"translate(20," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">L∞-error"
      << "</text>\n";

  std::size_t color = 0;
  double legend_y = kTop + 10;
  for (const auto& [key, s] : groups) {
    const char* c = kPalette[color++ % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) svg << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      svg << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    svg << "<line x1=\"" << kLeft + pw + 15 << "\" x2=\"" << kLeft + pw + 40 << "\" y1=\"" << legend_y << "\" y2=\""
        << legend_y << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + pw + 46 << "\" y=\"" << legend_y + 4 << "\">" << s.label << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vie::bench
