#ifndef DADMM_SVG_PLOT_HPP
#define DADMM_SVG_PLOT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "dadmm/errors.hpp"
#include "dadmm/metrics.hpp"

namespace dadmm {

inline constexpr double kLogFloor = 1e-16;

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  ///< already log10-transformed
};

/// log10(max(v, floor)); exact zeros and underflow land on the floor.
inline double clamped_log10(double v) { return std::log10(std::max(v, kLogFloor)); }

enum class MetricColumn { G, D };
enum class XAxis { Round, Communication };

inline Series make_series(const std::string& label, const std::vector<MetricsRecord>& recs,
                          MetricColumn col, XAxis axis) {
  Series s{label, {}, {}};
  for (const auto& r : recs) {
    s.x.push_back(axis == XAxis::Round ? static_cast<double>(r.r)
                                       : static_cast<double>(r.cumulative_comm));
    s.y.push_back(clamped_log10(col == MetricColumn::G ? r.G : r.D));
  }
  return s;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

/// Static line chart, one polyline per series, legend in the top-right corner.
inline std::string render_svg(const std::vector<Series>& series, const std::string& title,
                              const std::string& xlabel, const std::string& ylabel) {
  constexpr double W = 720, H = 480, left = 70, right = 20, top = 40, bottom = 55;
  static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax <= xmin) xmax = xmin + 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;

  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };
  using detail::num;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
         "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         detail::escape_xml(title) + "</text>\n";
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  const int ysteps = static_cast<int>(ymax - ymin);
  const int ystride = std::max(1, ysteps / 10);
  for (int k = 0; k <= ysteps; k += ystride) {
    const double v = ymin + k;
    out += "<line x1=\"" + num(left) + "\" x2=\"" + num(left + pw) + "\" y1=\"" + num(sy(v)) +
           "\" y2=\"" + num(sy(v)) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(v) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + num(v) + "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double v = xmin + (xmax - xmin) * k / 5.0;
    out += "<text x=\"" + num(sx(v)) + "\" y=\"" + num(top + ph + 16) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + num(std::round(v)) + "</text>\n";
  }
  out += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + detail::escape_xml(xlabel) + "</text>\n";
  out += "<text transform=\"translate(18," + num(top + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" + detail::escape_xml(ylabel) +
         "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = palette[i % palette.size()];
    out += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(color) +
           "\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k) out += ' ';
      out += num(sx(s.x[k])) + "," + num(sy(s.y[k]));
    }
    out += "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(i);
    out += "<line x1=\"" + num(left + pw - 150) + "\" x2=\"" + num(left + pw - 124) + "\" y1=\"" +
           num(ly) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(left + pw - 118) + "\" y=\"" + num(ly + 4) + "\" font-size=\"12\">" +
           detail::escape_xml(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

/// Writes <prefix>_G.svg and <prefix>_D.svg (and the *_comm variants when
/// requested). Returns the paths written.
inline std::vector<std::string> write_convergence_plots(
    const std::vector<std::pair<std::string, std::vector<MetricsRecord>>>& runs,
    const std::string& prefix, bool communication_axis = false) {
  std::vector<std::string> written;
  auto emit = [&](MetricColumn col, XAxis axis) {
    std::vector<Series> series;
    for (const auto& [label, recs] : runs) series.push_back(make_series(label, recs, col, axis));
    const std::string metric = col == MetricColumn::G ? "G" : "D";
    const std::string suffix = axis == XAxis::Round ? "" : "_comm";
    const std::string path = prefix + "_" + metric + suffix + ".svg";
    const std::string title = col == MetricColumn::G ? "Proximal gradient gap" : "Disagreement gap";
    write_text_file(path, render_svg(series, title,
                                     axis == XAxis::Round ? "iteration r" : "consensus steps",
                                     "log10 " + metric + "^r"));
    written.push_back(path);
  };
  emit(MetricColumn::G, XAxis::Round);
  emit(MetricColumn::D, XAxis::Round);
  if (communication_axis) {
    emit(MetricColumn::G, XAxis::Communication);
    emit(MetricColumn::D, XAxis::Communication);
  }
  return written;
}

}  // namespace dadmm

#endif  // DADMM_SVG_PLOT_HPP
