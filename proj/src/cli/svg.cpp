#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ssadr::cli::svg {

namespace {

constexpr double kW = 640, kH = 400, kL = 60, kR = 20, kT = 40, kB = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const {
    return kL + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (kW - kL - kR);
  }
  double py(double y) const {
    return kH - kB - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (kH - kT - kB);
  }
};

void open(std::ostringstream& s, const std::string& title, const Frame& f,
          const std::string& x_label, const std::string& y_label) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
    << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
    << "</text>\n"
    << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
    << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
    << kH - kB << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << kL << "\" y=\"" << kH - kB + 15 << "\">" << num(f.x0)
    << "</text>\n"
    << "<text x=\"" << kW - kR << "\" y=\"" << kH - kB + 15
    << "\" text-anchor=\"end\">" << num(f.x1) << "</text>\n"
    << "<text x=\"" << kL - 5 << "\" y=\"" << kH - kB
    << "\" text-anchor=\"end\">" << num(f.y0) << "</text>\n"
    << "<text x=\"" << kL - 5 << "\" y=\"" << kT + 5
    << "\" text-anchor=\"end\">" << num(f.y1) << "</text>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
    << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
    << "<text x=\"15\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 15 "
    << kH / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
}

}  // namespace

std::string bar_chart(const std::vector<Bar>& bars, const std::string& title,
                      const std::string& x_label) {
  Frame f{bars.empty() ? 0.0 : bars.front().low,
          bars.empty() ? 1.0 : bars.back().high, 0.0, 0.0};
  for (const auto& b : bars) f.y1 = std::max(f.y1, b.value);
  std::ostringstream s;
  open(s, title, f, x_label, "fraction");
  for (const auto& b : bars) {
    const double x = f.px(b.low), w = f.px(b.high) - x, y = f.py(b.value);
    s << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
      << num(std::max(w - 1.0, 0.5)) << "\" height=\"" << num(kH - kB - y)
      << "\" fill=\"" << kPalette[0] << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string line_chart(const std::vector<Series>& series,
                       const std::string& title, const std::string& y_label) {
  Frame f{0.0, 1.0, 0.0, 0.0};
  bool first = true;
  for (const auto& se : series)
    for (std::size_t i = 0; i < se.x.size(); ++i) {
      if (first) f = {se.x[i], se.x[i], 0.0, se.max[i]};
      first = false;
      f.x0 = std::min(f.x0, se.x[i]);
      f.x1 = std::max(f.x1, se.x[i]);
      f.y1 = std::max(f.y1, se.max[i]);
    }
  std::ostringstream s;
  open(s, title, f, "timestep", y_label);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& se = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::string band, line;
    for (std::size_t i = 0; i < se.x.size(); ++i)
      band += num(f.px(se.x[i])) + "," + num(f.py(se.max[i])) + " ";
    for (std::size_t i = se.x.size(); i-- > 0;)
      band += num(f.px(se.x[i])) + "," + num(f.py(se.min[i])) + " ";
    for (std::size_t i = 0; i < se.x.size(); ++i)
      line += num(f.px(se.x[i])) + "," + num(f.py(se.mean[i])) + " ";
    s << "<polygon points=\"" << band << "\" fill=\"" << colour
      << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n"
      << "<polyline points=\"" << line << "\" fill=\"none\" stroke=\"" << colour
      << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << kW - kR - 5 << "\" y=\"" << kT + 15 * (k + 1)
      << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << se.label
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace ssadr::cli::svg
