#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "cnsp/errors.hpp"

namespace cnsp {

/// Gauss-Jacobi quadrature for the weight (1-x)^alpha (1+x)^beta on [-1,1],
/// alpha, beta > -1.  Nodes/weights from the Golub-Welsch eigenproblem of the
/// Jacobi recurrence; the symmetric tridiagonal eigensolve is an implicit-shift
/// QL iteration carrying only the first eigenvector components.
struct JacobiRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

namespace detail {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Recurrence coefficients a_k (diagonal) and b_k (squared off-diagonal) of the
// monic Jacobi orthogonal polynomials, Gautschi's r_jacobi.
inline void jacobi_recurrence(int m, double al, double be, std::vector<double>& a,
                              std::vector<double>& b) {
  a.assign(m, 0.0);
  b.assign(m, 0.0);
  const double nu = (be - al) / (al + be + 2.0);
  a[0] = nu;
  b[0] = std::exp((al + be + 1.0) * std::numbers::ln2 + log_beta(al + 1.0, be + 1.0));  // mu0
  if (m == 1) return;
  const double albe2 = (al + be) * (al + be);
  for (int k = 1; k < m; ++k) {
    const double t = 2.0 * k + al + be;
    a[k] = (be * be - al * al) / (t * (t + 2.0));
    if (k == 1)
      b[k] = 4.0 * (al + 1.0) * (be + 1.0) / ((al + be + 2.0) * (al + be + 2.0) * (al + be + 3.0));
    else
      b[k] = 4.0 * k * (k + al) * (k + be) * (k + al + be) / (t * t * (t + 1.0) * (t - 1.0));
  }
  (void)albe2;
}

// Implicit-shift QL on a symmetric tridiagonal matrix (diag d, subdiag e);
// z accumulates the first row of the eigenvector matrix.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error("numeric", "tridiag_ql: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i], bq = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * bq;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - bq;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  e.pop_back();
}

}  // namespace detail

inline JacobiRule gauss_jacobi(int npts, double alpha, double beta) {
  if (npts < 1) throw invalid_argument("gauss_jacobi: need npts >= 1");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw invalid_argument("gauss_jacobi: alpha, beta must be > -1");
  std::vector<double> a, b;
  detail::jacobi_recurrence(npts, alpha, beta, a, b);
  const double mu0 = b[0];
  std::vector<double> d = a;
  std::vector<double> e(npts - 1);
  for (int k = 1; k < npts; ++k) e[k - 1] = std::sqrt(b[k]);
  std::vector<double> z(npts, 0.0);
  z[0] = 1.0;
  detail::tridiag_ql(d, e, z);
  JacobiRule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  std::vector<std::size_t> order(npts);
  for (int i = 0; i < npts; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  for (int i = 0; i < npts; ++i) {
    rule.nodes[i] = d[order[i]];
    rule.weights[i] = mu0 * z[order[i]] * z[order[i]];
  }
  if (alpha == beta) {  // enforce the symmetry the weight guarantees
    for (int i = 0, j = npts - 1; i < j; ++i, --j) {
      const double xm = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      rule.nodes[i] = -xm;
      rule.nodes[j] = xm;
      const double wm = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.weights[i] = rule.weights[j] = wm;
    }
    if (npts % 2 == 1) rule.nodes[npts / 2] = 0.0;
  }
  return rule;
}

}  // namespace cnsp
