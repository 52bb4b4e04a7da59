#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cnsp/errors.hpp"

namespace cnsp {

/// Monotonicity-preserving piecewise-cubic Hermite interpolant
/// (Fritsch-Carlson slope limiting). Evaluation outside the sample range
/// clamps to the end values.
class MonotoneCubic {
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t m = x_.size();
    if (m != y_.size() || m < 2) throw invalid_argument("MonotoneCubic: need >=2 samples");
    for (std::size_t i = 1; i < m; ++i)
      if (!(x_[i] > x_[i - 1])) throw invalid_argument("MonotoneCubic: x must increase");
    d_.assign(m, 0.0);
    std::vector<double> s(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) s[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_[0] = s[0];
    d_[m - 1] = s[m - 2];
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (s[i - 1] * s[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
        d_[i] = (w0 + w1) / (w0 / s[i - 1] + w1 / s[i]);  // weighted harmonic mean
      }
    }
    // limit end slopes to keep the first/last pieces monotone
    for (std::size_t i : {std::size_t(0), m - 1}) {
      const std::size_t k = (i == 0) ? 0 : m - 2;
      if (s[k] == 0.0)
        d_[i] = 0.0;
      else if (d_[i] / s[k] < 0.0)
        d_[i] = 0.0;
      else if (std::abs(d_[i]) > 3.0 * std::abs(s[k]))
        d_[i] = 3.0 * s[k];
    }
  }

  double operator()(double xq) const {
    if (xq <= x_.front()) return y_.front();
    if (xq >= x_.back()) return y_.back();
    const std::size_t i = interval(xq);
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

private:
  std::size_t interval(double xq) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
  }

  std::vector<double> x_, y_, d_;
};

/// Linear interpolation with clamped ends.
inline double lerp_clamped(const std::vector<double>& x, const std::vector<double>& y, double xq) {
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return (1.0 - t) * y[i] + t * y[i + 1];
}

}  // namespace cnsp
