#pragma once

// Minimal line-chart SVG writer. Charts are a convenience; the CSVs are the
// canonical outputs.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pairtrade::cli {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> values;
};

inline std::string svg_line_chart(const std::string& title, std::span<const SvgSeries> series, int width = 900,
                                  int height = 360) {
  constexpr int pad = 40;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t n = 0;
  for (const auto& s : series) {
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    n = std::max(n, s.values.size());
  }
  if (!(hi > lo)) {
    hi = lo + 1.0;
    lo -= 1.0;
  }
  const double sx = n > 1 ? static_cast<double>(width - 2 * pad) / static_cast<double>(n - 1) : 0.0;
  const double sy = static_cast<double>(height - 2 * pad) / (hi - lo);
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof buf, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n", width,
                height);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + std::to_string(pad) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" + title +
         "</text>\n";
  int legend_y = 20;
  for (const auto& s : series) {
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", pad + sx * static_cast<double>(i),
                    height - pad - (s.values[i] - lo) * sy);
      out += buf;
    }
    out += "\"/>\n";
    out += "<text x=\"" + std::to_string(width - 160) + "\" y=\"" + std::to_string(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + s.color + "\">" + s.label + "</text>\n";
    legend_y += 14;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"4\" y=\"%d\" font-size=\"10\">%.4g</text>\n", pad, hi);
  out += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"4\" y=\"%d\" font-size=\"10\">%.4g</text>\n", height - pad, lo);
  out += buf;
  out += "</svg>\n";
  return out;
}

}  // namespace pairtrade::cli
