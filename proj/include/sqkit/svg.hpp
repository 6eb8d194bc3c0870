#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace sqkit {

/// Minimal deterministic SVG renderers for the regenerated figure data.
/// Text output only: fixed canvas, fixed palette, fixed number formatting,
/// so identical inputs give byte-identical files.

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool line = true;  // false -> scatter markers
};

namespace svg_detail {

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
inline constexpr int kWidth = 640;
inline constexpr int kHeight = 480;
inline constexpr int kMarginLeft = 72;
inline constexpr int kMarginRight = 24;
inline constexpr int kMarginTop = 44;
inline constexpr int kMarginBottom = 56;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  double scale(double v, double px_lo, double px_hi) const {
    const double f = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return px_lo + f * (px_hi - px_lo);
  }
};

inline Range fit_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo));
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace svg_detail

/// Line/scatter chart with axes, five ticks per axis, and a legend.
inline std::string svg_chart(const std::string& title, const std::string& xlabel,
                             const std::string& ylabel, const std::vector<SvgSeries>& series) {
  using namespace svg_detail;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  const Range rx = fit_range(xmin, xmax);
  const Range ry = fit_range(ymin, ymax);
  const double px0 = kMarginLeft, px1 = kWidth - kMarginRight;
  const double py0 = kHeight - kMarginBottom, py1 = kMarginTop;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + coord(kWidth / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" + escape(title) + "</text>\n";

  // Axes and ticks.
  out += "<line x1=\"" + coord(px0) + "\" y1=\"" + coord(py0) + "\" x2=\"" + coord(px1) +
         "\" y2=\"" + coord(py0) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + coord(px0) + "\" y1=\"" + coord(py0) + "\" x2=\"" + coord(px0) +
         "\" y2=\"" + coord(py1) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    const double tx = rx.scale(fx, px0, px1);
    const double ty = ry.scale(fy, py0, py1);
    out += "<line x1=\"" + coord(tx) + "\" y1=\"" + coord(py0) + "\" x2=\"" + coord(tx) +
           "\" y2=\"" + coord(py0 + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(tx) + "\" y=\"" + coord(py0 + 20) +
           "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" + num(fx) +
           "</text>\n";
    out += "<line x1=\"" + coord(px0 - 5) + "\" y1=\"" + coord(ty) + "\" x2=\"" + coord(px0) +
           "\" y2=\"" + coord(ty) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(px0 - 8) + "\" y=\"" + coord(ty + 4) +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" + num(fy) +
           "</text>\n";
  }
  out += "<text x=\"" + coord((px0 + px1) / 2) + "\" y=\"" + coord(kHeight - 12.0) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
         escape(xlabel) + "</text>\n";
  out += "<text x=\"18\" y=\"" + coord((py0 + py1) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 18 " +
         coord((py0 + py1) / 2) + ")\">" + escape(ylabel) + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 6];
    if (series[s].line) {
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : series[s].points) {
        out += coord(rx.scale(x, px0, px1)) + "," + coord(ry.scale(y, py0, py1)) + " ";
      }
      out += "\"/>\n";
    } else {
      for (const auto& [x, y] : series[s].points) {
        out += "<circle cx=\"" + coord(rx.scale(x, px0, px1)) + "\" cy=\"" +
               coord(ry.scale(y, py0, py1)) + "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.7\"/>\n";
      }
    }
    // Legend entry.
    const double ly = kMarginTop + 16.0 * static_cast<double>(s);
    out += "<rect x=\"" + coord(px1 - 150.0) + "\" y=\"" + coord(ly) +
           "\" width=\"12\" height=\"4\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + coord(px1 - 132.0) + "\" y=\"" + coord(ly + 6) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + escape(series[s].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

/// Heatmap with per-cell annotations (used for the confusion matrix).
inline std::string svg_heatmap(const std::string& title, const std::vector<std::string>& row_labels,
                               const std::vector<std::string>& col_labels,
                               const std::vector<std::vector<double>>& values) {
  using namespace svg_detail;
  const std::size_t nr = values.size();
  const std::size_t nc = nr > 0 ? values.front().size() : 0;
  double vmax = 1.0;
  for (const auto& row : values) {
    for (double v : row) vmax = std::max(vmax, v);
  }

  const double cell = 90.0;
  const double ox = 140.0, oy = 70.0;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + coord(kWidth / 2.0) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" + escape(title) + "</text>\n";

  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double f = values[r][c] / vmax;
      const int blue = static_cast<int>(std::lround(255.0 * (1.0 - 0.75 * f)));
      char color[8];
      std::snprintf(color, sizeof(color), "#%02x%02xff", blue, blue);
      const double x = ox + cell * static_cast<double>(c);
      const double y = oy + cell * static_cast<double>(r);
      out += "<rect x=\"" + coord(x) + "\" y=\"" + coord(y) + "\" width=\"" + coord(cell) +
             "\" height=\"" + coord(cell) + "\" fill=\"" + color + "\" stroke=\"black\"/>\n";
      out += "<text x=\"" + coord(x + cell / 2) + "\" y=\"" + coord(y + cell / 2 + 5) +
             "\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">" +
             num(values[r][c]) + "</text>\n";
    }
  }
  for (std::size_t r = 0; r < nr; ++r) {
    out += "<text x=\"" + coord(ox - 10.0) + "\" y=\"" + coord(oy + cell * (r + 0.5) + 4) +
           "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" +
           escape(row_labels[r]) + "</text>\n";
  }
  for (std::size_t c = 0; c < nc; ++c) {
    out += "<text x=\"" + coord(ox + cell * (c + 0.5)) + "\" y=\"" + coord(oy - 10.0) +
           "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
           escape(col_labels[c]) + "</text>\n";
  }
  out += "<text x=\"" + coord(ox - 110.0) + "\" y=\"" + coord(oy + cell * nr / 2) +
         "\" font-size=\"12\" font-family=\"sans-serif\">true</text>\n";
  out += "<text x=\"" + coord(ox + cell * nc / 2) + "\" y=\"" + coord(oy + cell * nr + 40.0) +
         "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">predicted</text>\n";
  out += "</svg>\n";
  return out;
}

/// Plain text grid (used for the per-case metric summary).
inline std::string svg_table(const std::string& title, const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) {
  using namespace svg_detail;
  const double row_h = 26.0;
  const double col_w = (kWidth - 80.0) / static_cast<double>(header.size());
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + coord(kWidth / 2.0) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" + escape(title) + "</text>\n";

  const auto cell_text = [&](std::size_t r, std::size_t c, const std::string& text, bool bold) {
    const double x = 40.0 + col_w * (static_cast<double>(c) + 0.5);
    const double y = 60.0 + row_h * static_cast<double>(r) + 17.0;
    out += "<text x=\"" + coord(x) + "\" y=\"" + coord(y) +
           "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\"" +
           (bold ? " font-weight=\"bold\"" : "") + ">" + escape(text) + "</text>\n";
  };

  for (std::size_t c = 0; c < header.size(); ++c) cell_text(0, c, header[c], true);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) cell_text(r + 1, c, rows[r][c], false);
  }
  const double line_y = 60.0 + row_h - 2.0;
  out += "<line x1=\"40\" y1=\"" + coord(line_y) + "\" x2=\"" + coord(kWidth - 40.0) + "\" y2=\"" +
         coord(line_y) + "\" stroke=\"black\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace sqkit
