#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qcc/report.hpp"

namespace qcc {

/// Self-contained SVG line chart of a table: first column as x, every other
/// column as one polyline.
inline std::string table_to_svg(const Table& t, const std::string& title) {
  const double W = 720, H = 440, ml = 70, mr = 160, mt = 40, mb = 50;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf"};
  if (t.data.size() < 2 || t.rows() < 2) return "<svg xmlns='http://www.w3.org/2000/svg'/>";

  const auto& xs = t.data[0];
  double xmin = *std::min_element(xs.begin(), xs.end());
  double xmax = *std::max_element(xs.begin(), xs.end());
  double ymin = 1e300, ymax = -1e300;
  for (std::size_t c = 1; c < t.data.size(); ++c)
    for (double v : t.data[c]) {
      if (std::isfinite(v)) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  double yspan = ymax - ymin;
  ymin -= 0.05 * yspan;
  ymax += 0.05 * yspan;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns='http://www.w3.org/2000/svg' width='%g' height='%g' "
                "viewBox='0 0 %g %g' font-family='monospace' font-size='12'>\n",
                W, H, W, H);
  svg += buf;
  svg += "<rect width='100%' height='100%' fill='white'/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x='%g' y='24' font-size='15' text-anchor='middle'>%s</text>\n",
                (ml + W - mr) / 2, title.c_str());
  svg += buf;

  // axes with five ticks each
  for (int i = 0; i <= 5; ++i) {
    double x = xmin + (xmax - xmin) * i / 5.0;
    double y = ymin + (ymax - ymin) * i / 5.0;
    std::snprintf(buf, sizeof(buf),
                  "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='#ddd'/>\n",
                  px(x), py(ymin), px(x), py(ymax));
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='#ddd'/>\n",
                  px(xmin), py(y), px(xmax), py(y));
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x='%g' y='%g' text-anchor='middle'>%.3g</text>\n",
                  px(x), H - mb + 18, x);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x='%g' y='%g' text-anchor='end'>%.3g</text>\n",
                  ml - 6, py(y) + 4, y);
    svg += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<rect x='%g' y='%g' width='%g' height='%g' fill='none' stroke='black'/>\n",
                ml, mt, W - ml - mr, H - mt - mb);
  svg += buf;

  for (std::size_t c = 1; c < t.data.size(); ++c) {
    const char* color = palette[(c - 1) % 7];
    svg += "<polyline fill='none' stroke='";
    svg += color;
    svg += "' stroke-width='1.5' points='";
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (!std::isfinite(t.data[c][r])) continue;
      std::snprintf(buf, sizeof(buf), "%g,%g ", px(xs[r]), py(t.data[c][r]));
      svg += buf;
    }
    svg += "'/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x='%g' y='%g' fill='%s'>%s</text>\n",
                  W - mr + 10, mt + 16.0 * c, color, t.columns[c].c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

/// Writes <out>/tables/<name>.csv and optionally <out>/plots/<name>.svg for
/// the requested table.
inline void emit_plot_data(const Report& report, const std::string& which,
                           const std::filesystem::path& out_dir, bool emit_svg) {
  auto it = report.tables.find(which);
  if (it == report.tables.end()) throw UnknownTable("emit_plot_data: no table named " + which);
  std::filesystem::create_directories(out_dir / "tables");
  std::ofstream csv(out_dir / "tables" / (which + ".csv"));
  csv << table_to_csv(it->second);
  if (emit_svg) {
    std::filesystem::create_directories(out_dir / "plots");
    std::ofstream svg(out_dir / "plots" / (which + ".svg"));
    svg << table_to_svg(it->second, which);
  }
}

}  // namespace qcc
