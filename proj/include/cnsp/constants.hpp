#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "cnsp/errors.hpp"

namespace cnsp {

/// Surface area of the unit sphere in R^k: 2 pi^{k/2} / Gamma(k/2).
inline double unit_sphere_area(int k) {
  if (k < 1) throw invalid_argument("unit_sphere_area: k must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

/// Best constant of the Sobolev inequality ||f||_{2n/(n-2)}^2 <= A_n ||grad f||_2^2.
inline double sobolev_constant(int n) {
  if (n < 3) throw invalid_argument("sobolev_constant: n must be >= 3");
  return 4.0 / (n * (n - 2.0)) * std::pow(unit_sphere_area(n + 1), -2.0 / n);
}

/// Model parameters and derived constants. All quantities are dimensionless
/// model units; the pressure law is p(rho) = a0 rho^gamma with a0 fixed by
/// scaling, and kappa = +1 (gaseous star) or -1 (plasma).
struct ModelParams {
  int n = 3;           // spatial dimension, >= 3
  double gamma = 2.0;  // adiabatic exponent, > 1
  int kappa = 1;       // field coupling sign
  double eps = 0.1;    // viscosity, in (0, 1]

  double a0 = 0.0;        // pressure constant (gamma-1)^2 / (4 gamma)
  double theta = 0.0;     // (gamma-1)/2
  double kernel_exp = 0.0;  // entropy kernel exponent (3-gamma)/(2(gamma-1))
  double omega_n = 0.0;   // unit-sphere area in R^n
  double A_n = 0.0;       // sharp Sobolev constant

  // integral-exponent fast path (gamma_int == 0 when gamma is not integral)
  int gamma_int = 0;

  double pow_gamma(double rho) const {
    if (gamma_int > 0) {
      double p = 1.0;
      int k = gamma_int;
      double v = rho;
      while (k) {
        if (k & 1) p *= v;
        v *= v;
        k >>= 1;
      }
      return p;
    }
    return std::pow(rho, gamma);
  }
  double pow_gamma_m1(double rho) const {
    return gamma_int > 0 ? pow_gamma(rho) / rho : std::pow(rho, gamma - 1.0);
  }
  double pressure(double rho) const { return a0 * pow_gamma(rho); }
  double dpressure(double rho) const { return a0 * gamma * pow_gamma_m1(rho); }
  /// Specific internal energy e(rho) = a0/(gamma-1) rho^{gamma-1}.
  double internal_energy(double rho) const { return a0 / (gamma - 1.0) * pow_gamma_m1(rho); }
  double sound_speed(double rho) const { return std::sqrt(gamma * a0 * pow_gamma_m1(rho)); }
};

inline ModelParams derive(int n, double gamma, int kappa, double eps) {
  if (n < 3) throw invalid_argument("derive: n must be an integer >= 3");
  if (!(gamma > 1.0)) throw invalid_argument("derive: gamma must be > 1");
  if (kappa != 1 && kappa != -1) throw invalid_argument("derive: kappa must be +1 or -1");
  if (!(eps > 0.0) || eps > 1.0) throw invalid_argument("derive: eps must be in (0, 1]");
  ModelParams p;
  p.n = n;
  p.gamma = gamma;
  p.kappa = kappa;
  p.eps = eps;
  p.a0 = (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma);
  p.theta = 0.5 * (gamma - 1.0);
  p.kernel_exp = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  p.omega_n = unit_sphere_area(n);
  p.A_n = sobolev_constant(n);
  if (gamma == std::floor(gamma) && gamma <= 16.0) p.gamma_int = static_cast<int>(gamma);
  return p;
}

namespace detail {
// Tolerant equality test against the threshold exponent 2(n-1)/n.
inline bool at_upper_gamma(int n, double gamma) {
  const double gc = 2.0 * (n - 1.0) / n;
  return std::abs(gamma - gc) <= 8.0 * std::numeric_limits<double>::epsilon() * gc;
}
}  // namespace detail

/// Coefficient B_{n,gamma} of the mass-energy functional controlling the
/// gravitational part of the energy estimate (gaseous stars only).
inline double B_coefficient(const ModelParams& p) {
  if (p.kappa != 1) throw invalid_argument("B_coefficient: defined for kappa=+1 only");
  const int n = p.n;
  const double g = p.gamma;
  if (!(g > 2.0 * n / (n + 2.0)))
    throw invalid_argument("B_coefficient: requires gamma > 2n/(n+2)");
  const double e1 = -(n - 2.0) / (n * (g - 1.0));
  const double e2 = (2.0 * (n - 1.0) - n * g) / (n * (g - 1.0));
  return 2.0 / (n * (n - 2.0)) * std::pow(p.a0 / (g - 1.0), e1) *
         std::pow(p.omega_n, e2) * std::pow(unit_sphere_area(n + 1), -2.0 / n);
}

struct CriticalMassInputs {
  ModelParams params;
  double E0 = 0.0;  // total initial energy, model units
  double M = 0.0;   // total mass, model units
};

/// Critical mass M_c(gamma) below which the gaseous-star energy estimate
/// closes, for gamma in (2n/(n+2), 2(n-1)/n].  At the endpoint the value is
/// independent of E0.
inline double critical_mass(const CriticalMassInputs& in) {
  const ModelParams& p = in.params;
  if (p.kappa != 1) throw invalid_argument("critical_mass: defined for kappa=+1 only");
  if (!(in.E0 > 0.0)) throw invalid_argument("critical_mass: E0 must be > 0");
  const int n = p.n;
  const double g = p.gamma;
  const double lo = 2.0 * n / (n + 2.0);
  if (!(g > lo) || (g > 2.0 * (n - 1.0) / n && !detail::at_upper_gamma(n, g)))
    throw invalid_argument("critical_mass: gamma outside (2n/(n+2), 2(n-1)/n]");
  const double B = B_coefficient(p);
  if (detail::at_upper_gamma(n, g)) return std::pow(B, -0.5 * n);
  const double denom = (n + 2.0) * g - 2.0 * n;
  const double e1 = -n * (g - 1.0) / denom;
  const double e2 = -(2.0 * (n - 1.0) - n * g) / denom;
  return std::pow((n - 2.0) * B / (n * (g - 1.0)), e1) *
         std::pow((n - 2.0) * in.E0 / (2.0 * (n - 1.0) - n * g), e2);
}

/// Coefficient C_gamma of the closed energy inequality; positive iff M < M_c.
inline double gamma_coefficient(const ModelParams& p, double M) {
  if (p.kappa != 1) throw invalid_argument("gamma_coefficient: defined for kappa=+1 only");
  const int n = p.n;
  const double g = p.gamma;
  const double lo = 2.0 * n / (n + 2.0);
  if (!(g > lo) || (g > 2.0 * (n - 1.0) / n && !detail::at_upper_gamma(n, g)))
    throw invalid_argument("gamma_coefficient: gamma outside (2n/(n+2), 2(n-1)/n]");
  double c;
  if (detail::at_upper_gamma(n, g))
    c = 1.0 - B_coefficient(p) * std::pow(M, 2.0 / n);
  else
    c = (2.0 * (n - 1.0) - n * g) / (n - 2.0);
  if (!(c > 0.0))
    throw invalid_argument("gamma_coefficient: nonpositive (mass at or above critical)");
  return c;
}

}  // namespace cnsp
