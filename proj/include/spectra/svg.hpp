#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spectra/errors.hpp"

namespace spectra {

/// Minimal deterministic SVG plotting surface: fixed viewport, data-space
/// mapping, no timestamps or external resources, so reruns are byte-identical.
class SvgCanvas {
 public:
  SvgCanvas(double x_min, double x_max, double y_min, double y_max, int width = 720,
            int height = 480)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), w_(width), h_(height) {}

  void add_title(const std::string& text) {
    body_ << "<text x=\"" << fmt(w_ / 2.0) << "\" y=\"18\" text-anchor=\"middle\" "
          << "font-family=\"monospace\" font-size=\"13\">" << text << "</text>\n";
  }

  void add_hist_bar(double x_lo, double x_hi, double height, const std::string& fill,
                    double opacity = 1.0) {
    const double x = px(x_lo);
    const double w = std::max(0.0, px(x_hi) - px(x_lo));
    const double y = py(height);
    const double hpx = std::max(0.0, py(0.0) - py(height));
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(hpx) << "\" fill=\"" << fill << "\" fill-opacity=\""
          << fmt(opacity) << "\" stroke=\"none\"/>\n";
  }

  void add_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::string& stroke, double stroke_width = 1.5) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt(stroke_width) << "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) body_ << ' ';
      body_ << fmt(px(xs[i])) << ',' << fmt(py(ys[i]));
    }
    body_ << "\"/>\n";
  }

  void add_hline(double y, const std::string& stroke, const std::string& dash = "6,4") {
    body_ << "<line x1=\"" << fmt(px(x_min_)) << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
          << fmt(px(x_max_)) << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"" << stroke
          << "\" stroke-dasharray=\"" << dash << "\"/>\n";
  }

  /// Classic box glyph: q1..q3 box, median bar, whiskers to min/max.
  void add_box(double x_center, double half_width, double min, double q1, double median,
               double q3, double max, const std::string& stroke) {
    const double xl = px(x_center - half_width);
    const double xr = px(x_center + half_width);
    const double xc = px(x_center);
    body_ << "<rect x=\"" << fmt(xl) << "\" y=\"" << fmt(py(q3)) << "\" width=\""
          << fmt(xr - xl) << "\" height=\"" << fmt(py(q1) - py(q3)) << "\" fill=\"none\" stroke=\""
          << stroke << "\"/>\n";
    hseg(xl, xr, median, stroke);
    vseg(xc, q3, max, stroke);
    vseg(xc, min, q1, stroke);
    hseg(px(x_center - half_width / 2), px(x_center + half_width / 2), max, stroke);
    hseg(px(x_center - half_width / 2), px(x_center + half_width / 2), min, stroke);
  }

  void add_label(double x, double y, const std::string& text,
                 const std::string& anchor = "middle") {
    body_ << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\""
          << anchor << "\" font-family=\"monospace\" font-size=\"11\">" << text
          << "</text>\n";
  }

  void add_axes(int x_ticks = 6, int y_ticks = 5) {
    const double x0 = px(x_min_), x1 = px(x_max_);
    const double y0 = py(y_min_), y1 = py(y_max_);
    body_ << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
          << "\" y2=\"" << fmt(y0) << "\" stroke=\"black\"/>\n";
    body_ << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0)
          << "\" y2=\"" << fmt(y1) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= x_ticks; ++i) {
      const double v = x_min_ + (x_max_ - x_min_) * i / x_ticks;
      body_ << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(px(v))
            << "\" y2=\"" << fmt(y0 + 4) << "\" stroke=\"black\"/>\n";
      body_ << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(y0 + 16)
            << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">"
            << tick(v) << "</text>\n";
    }
    for (int i = 0; i <= y_ticks; ++i) {
      const double v = y_min_ + (y_max_ - y_min_) * i / y_ticks;
      body_ << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(py(v)) << "\" x2=\"" << fmt(x0)
            << "\" y2=\"" << fmt(py(v)) << "\" stroke=\"black\"/>\n";
      body_ << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(py(v) + 3)
            << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" << tick(v)
            << "</text>\n";
    }
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
        << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
        << "<rect width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out << str();
    if (!out) throw io_error("write failure on " + path.string());
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }
  static std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
  }
  double px(double x) const {
    return kPadLeft + (x - x_min_) / (x_max_ - x_min_) * (w_ - kPadLeft - kPadRight);
  }
  double py(double y) const {
    return h_ - kPadBottom - (y - y_min_) / (y_max_ - y_min_) * (h_ - kPadTop - kPadBottom);
  }
  void hseg(double x_left_px, double x_right_px, double y, const std::string& stroke) {
    body_ << "<line x1=\"" << fmt(x_left_px) << "\" y1=\"" << fmt(py(y)) << "\" x2=\""
          << fmt(x_right_px) << "\" y2=\"" << fmt(py(y)) << "\" stroke=\"" << stroke
          << "\"/>\n";
  }
  void vseg(double x_px, double y_lo, double y_hi, const std::string& stroke) {
    body_ << "<line x1=\"" << fmt(x_px) << "\" y1=\"" << fmt(py(y_lo)) << "\" x2=\"" << fmt(x_px)
          << "\" y2=\"" << fmt(py(y_hi)) << "\" stroke=\"" << stroke << "\"/>\n";
  }

  static constexpr double kPadLeft = 56.0;
  static constexpr double kPadRight = 16.0;
  static constexpr double kPadTop = 30.0;
  static constexpr double kPadBottom = 36.0;

  double x_min_, x_max_, y_min_, y_max_;
  int w_, h_;
  std::ostringstream body_;
};

}  // namespace spectra
