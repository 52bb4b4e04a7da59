#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cnsp/errors.hpp"

namespace cnsp {

/// Composite Simpson on a uniform grid of `f.size()` samples with spacing h.
/// An even sample count is handled by a 3/8 rule on the last three intervals.
inline double simpson_uniform(std::span<const double> f, double h) {
  const std::size_t m = f.size();
  if (m < 2) return 0.0;
  if (m == 2) return 0.5 * h * (f[0] + f[1]);
  double total = 0.0;
  std::size_t last = m - 1;
  if (m % 2 == 0) {  // odd interval count: peel a 3/8 block at the end
    total += 3.0 * h / 8.0 * (f[m - 4] + 3.0 * f[m - 3] + 3.0 * f[m - 2] + f[m - 1]);
    last = m - 4;
    if (last == 0) return total;
  }
  double s = f[0] + f[last];
  for (std::size_t i = 1; i < last; i += 2) s += 4.0 * f[i];
  for (std::size_t i = 2; i < last; i += 2) s += 2.0 * f[i];
  return total + h / 3.0 * s;
}

inline double simpson_uniform(const std::vector<double>& f, double h) {
  return simpson_uniform(std::span<const double>(f.data(), f.size()), h);
}

namespace detail {
inline double adapt_step(const std::function<double(double)>& f, double a, double b, double fa,
                         double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 40) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adapt_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Adaptive Simpson over [a,b] pre-split into panels of width <= panel_w, so
/// narrow features are not missed on wide ranges.
inline double adaptive_simpson_panels(const std::function<double(double)>& f, double a, double b,
                                      double tol = 1e-12, double panel_w = 0.5) {
  if (!(b > a)) return 0.0;
  const int k = std::max(1, static_cast<int>(std::ceil((b - a) / panel_w)));
  const double h = (b - a) / k;
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += adaptive_simpson(f, a + i * h, a + (i + 1) * h, tol / k);
  return s;
}

/// Fixed 5-point Gauss-Legendre on [a,b]; exact to polynomial degree 9.
template <class F>
inline double gauss5(F&& f, double a, double b) {
  static constexpr double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
  static constexpr double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += ws[i] * f(c + hw * xs[i]);
  return hw * s;
}

/// Cumulative trapezoid of samples (x_i, f_i); out[0] = 0.
inline std::vector<double> cumulative_trapezoid(std::span<const double> x,
                                                std::span<const double> f) {
  if (x.size() != f.size()) throw invalid_argument("cumulative_trapezoid: size mismatch");
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
  return out;
}

/// Exact integral of q(z) = (c0 + c1 z) z^{n-1} over [z0, z1], integer n >= 1.
inline double linear_times_power_integral(double c0, double c1, int n, double z0, double z1) {
  const double zn0 = std::pow(z0, n), zn1 = std::pow(z1, n);
  return c0 * (zn1 - zn0) / n + c1 * (zn1 * z1 - zn0 * z0) / (n + 1.0);
}

/// Cumulative integral of rho(z) z^{n-1} where rho is the piecewise-linear
/// interpolant of the samples; exact per interval. out[i] = integral over
/// [r[0], r[i]].
inline std::vector<double> cumulative_mass_integral(std::span<const double> r,
                                                    std::span<const double> rho, int n) {
  if (r.size() != rho.size()) throw invalid_argument("cumulative_mass_integral: size mismatch");
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double dr = r[i] - r[i - 1];
    if (!(dr > 0.0)) throw invalid_argument("cumulative_mass_integral: r not increasing");
    const double c1 = (rho[i] - rho[i - 1]) / dr;
    const double c0 = rho[i - 1] - c1 * r[i - 1];
    out[i] = out[i - 1] + linear_times_power_integral(c0, c1, n, r[i - 1], r[i]);
  }
  return out;
}

}  // namespace cnsp
