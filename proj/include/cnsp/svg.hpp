#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "cnsp/errors.hpp"
#include "cnsp/io.hpp"

namespace cnsp {

/// Dependency-free SVG line plot: axes box, tick labels, one polyline per
/// series, optional log scales.
class SvgPlot {
public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void log_x(bool v) { logx_ = v; }
  void log_y(bool v) { logy_ = v; }

  void add_series(const std::string& label, std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size()) throw invalid_argument("SvgPlot: series size mismatch");
    series_.push_back({label, std::move(xs), std::move(ys)});
  }

  void write(const std::string& path) const {
    const double W = 720, H = 480, L = 80, R = 24, T = 40, B = 56;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double x = tx(s.x[i]), y = ty(s.y[i]);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    if (!(xmax > xmin)) { xmax = xmin + 1.0; xmin -= 1.0; }
    if (!(ymax > ymin)) { ymax = ymin + 1.0; ymin -= 1.0; }
    const double padx = 0.03 * (xmax - xmin), pady = 0.06 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
    auto px = [&](double x) { return L + (tx(x) - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (ty(y) - ymin) / (ymax - ymin) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << W / 2 << "' y='24' font-size='16' text-anchor='middle'>" << title_
        << "</text>\n"
        << "<rect x='" << L << "' y='" << T << "' width='" << W - L - R << "' height='"
        << H - T - B << "' fill='none' stroke='black'/>\n";
    // ticks
    for (int i = 0; i <= 4; ++i) {
      const double fx = xmin + (xmax - xmin) * i / 4.0;
      const double fy = ymin + (ymax - ymin) * i / 4.0;
      out << "<text x='" << L + (W - L - R) * i / 4.0 << "' y='" << H - B + 18
          << "' font-size='11' text-anchor='middle'>" << tick(fx, logx_) << "</text>\n";
      out << "<text x='" << L - 6 << "' y='" << H - B - (H - T - B) * i / 4.0 + 4
          << "' font-size='11' text-anchor='end'>" << tick(fy, logy_) << "</text>\n";
    }
    out << "<text x='" << (L + W - R) / 2 << "' y='" << H - 16
        << "' font-size='13' text-anchor='middle'>" << xlabel_ << "</text>\n";
    out << "<text x='18' y='" << (T + H - B) / 2
        << "' font-size='13' text-anchor='middle' transform='rotate(-90 18 "
        << (T + H - B) / 2 << ")'>" << ylabel_ << "</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    for (std::size_t k = 0; k < series_.size(); ++k) {
      const auto& s = series_[k];
      out << "<polyline fill='none' stroke='" << colors[k % 8] << "' stroke-width='1.5' points='";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double x = tx(s.x[i]), y = ty(s.y[i]);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        out << px(s.x[i]) << "," << py(s.y[i]) << " ";
      }
      out << "'/>\n";
      out << "<text x='" << W - R - 8 << "' y='" << T + 18 + 16 * k
          << "' font-size='12' text-anchor='end' fill='" << colors[k % 8] << "'>" << s.label
          << "</text>\n";
    }
    out << "</svg>\n";
  }

private:
  struct Series {
    std::string label;
    std::vector<double> x, y;
  };
  double tx(double v) const { return logx_ ? std::log10(std::max(v, 1e-300)) : v; }
  double ty(double v) const { return logy_ ? std::log10(std::max(v, 1e-300)) : v; }
  static std::string tick(double v, bool lg) {
    char buf[32];
    if (lg)
      std::snprintf(buf, sizeof buf, "1e%.1f", v);
    else
      std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }

  std::string title_, xlabel_, ylabel_;
  bool logx_ = false, logy_ = false;
  std::vector<Series> series_;
};

}  // namespace cnsp
