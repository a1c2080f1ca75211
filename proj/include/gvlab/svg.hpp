#pragma once

// Static SVG 1.1 plot emitter. One polyline per series over numeric axes,
// optional log-10 x scale. No timestamps, no ids derived from addresses, no
// float formatting that depends on locale: the same plot payload always
// yields the same bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false;
  int width = 960, height = 600;
};

namespace detail {

// fixed two-decimal pixel coordinates keep the output compact and stable
inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
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

}  // namespace detail

inline std::string emit_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  if (series.empty()) throw std::invalid_argument("plot needs at least one series");
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x/y length mismatch");
    if (s.x.size() < 2) throw std::invalid_argument("series needs at least two points");
  }

  const double W = spec.width, H = spec.height;
  const double ml = 70, mr = 20, mt = spec.title.empty() ? 20 : 44, mb = 52;

  auto xval = [&](double x) {
    if (!spec.log_x) return x;
    if (!(x > 0)) throw std::invalid_argument("log-x plot requires positive x values");
    return std::log10(x);
  };

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_min = std::min(x_min, xval(s.x[i]));
      x_max = std::max(x_max, xval(s.x[i]));
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  // headroom so extreme points do not sit on the frame
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto X = [&](double x) { return ml + (xval(x) - x_min) / (x_max - x_min) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - y_min) / (y_max - y_min) * (H - mt - mb); };

  std::string out;
  out.reserve(1 << 16);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"";
  out += detail::px(W);
  out += "\" height=\"";
  out += detail::px(H);
  out += "\" viewBox=\"0 0 " + detail::px(W) + " " + detail::px(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (!spec.title.empty())
    out += "<text x=\"" + detail::px(W / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           detail::escape(spec.title) + "</text>\n";

  // frame
  out += "<rect x=\"" + detail::px(ml) + "\" y=\"" + detail::px(mt) + "\" width=\"" +
         detail::px(W - ml - mr) + "\" height=\"" + detail::px(H - mt - mb) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // x ticks: decades on a log axis, six even splits otherwise
  std::vector<double> xticks;
  if (spec.log_x) {
    for (int d = static_cast<int>(std::ceil(x_min)); d <= static_cast<int>(std::floor(x_max)); ++d)
      xticks.push_back(std::pow(10.0, d));
  } else {
    for (int i = 0; i <= 6; ++i) xticks.push_back(x_min + (x_max - x_min) * i / 6.0);
  }
  for (double t : xticks) {
    const double gx = X(spec.log_x ? t : t);
    out += "<line x1=\"" + detail::px(gx) + "\" y1=\"" + detail::px(H - mb) + "\" x2=\"" +
           detail::px(gx) + "\" y2=\"" + detail::px(H - mb + 6) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + detail::px(gx) + "\" y=\"" + detail::px(H - mb + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           detail::tick_label(t) + "</text>\n";
  }

  for (int i = 0; i <= 5; ++i) {
    const double v = y_min + (y_max - y_min) * i / 5.0;
    const double gy = Y(v);
    out += "<line x1=\"" + detail::px(ml - 6) + "\" y1=\"" + detail::px(gy) + "\" x2=\"" +
           detail::px(ml) + "\" y2=\"" + detail::px(gy) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + detail::px(ml - 10) + "\" y=\"" + detail::px(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           detail::tick_label(v) + "</text>\n";
  }

  if (!spec.x_label.empty())
    out += "<text x=\"" + detail::px(ml + (W - ml - mr) / 2) + "\" y=\"" + detail::px(H - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           detail::escape(spec.x_label) + "</text>\n";
  if (!spec.y_label.empty())
    out += "<text x=\"16\" y=\"" + detail::px(mt + (H - mt - mb) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
           detail::px(mt + (H - mt - mb) / 2) + ")\">" + detail::escape(spec.y_label) +
           "</text>\n";

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    out += "<polyline fill=\"none\" stroke=\"";
    out += kPalette[si % 4];
    out += "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out += ' ';
      out += detail::px(X(s.x[i]));
      out += ',';
      out += detail::px(Y(s.y[i]));
    }
    out += "\"/>\n";
    if (!s.label.empty()) {
      const double ly = mt + 18 + 16 * static_cast<double>(si);
      out += "<line x1=\"" + detail::px(ml + 10) + "\" y1=\"" + detail::px(ly - 4) + "\" x2=\"" +
             detail::px(ml + 34) + "\" y2=\"" + detail::px(ly - 4) + "\" stroke=\"";
      out += kPalette[si % 4];
      out += "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + detail::px(ml + 40) + "\" y=\"" + detail::px(ly) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape(s.label) +
             "</text>\n";
    }
  }

  out += "</svg>\n";
  return out;
}

}  // namespace gvlab::svg
