#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cnsp/constants.hpp"
#include "cnsp/errors.hpp"
#include "cnsp/jacobi_rule.hpp"

namespace cnsp {

/// Quadrature state for weak entropy pairs of the 1-D isentropic system.
///
/// A weak entropy pair generated by a test function psi is evaluated through
/// the kernel representation; after the change of variables s = u + rho^theta
/// sigma the kernel becomes rho (1-sigma^2)^bexp dsigma (the exponent identity
/// theta(2 bexp + 1) = 1 makes the rho prefactor exact).  The kernel is
/// normalized so that psi = 1 reproduces eta = rho; with the model's pressure
/// constant this makes psi = s^2/2 reproduce the mechanical energy pair
/// exactly.  Quadrature is Gauss-Jacobi with both exponents equal to bexp, so
/// endpoint singularities for gamma > 3 (bexp < 0) cost no accuracy.
struct KernelParams {
  double gamma = 2.0;
  double theta = 0.5;   // (gamma-1)/2
  double bexp = 0.5;    // (3-gamma)/(2(gamma-1))
  double a0 = 0.125;    // (gamma-1)^2/(4 gamma)
  double c_norm = 1.0;  // 1 / int_{-1}^{1} (1-sigma^2)^bexp dsigma
  JacobiRule full;      // weight (1-s)^b (1+s)^b
  JacobiRule left;      // weight (1+s)^b   (kink-split, left piece)
  JacobiRule right;     // weight (1-s)^b   (kink-split, right piece)
  int npts = 64;
};

inline KernelParams make_kernel(double gamma, int npts = 64) {
  if (!(gamma > 1.0)) throw invalid_argument("make_kernel: gamma must be > 1");
  KernelParams kp;
  kp.gamma = gamma;
  kp.theta = 0.5 * (gamma - 1.0);
  kp.bexp = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  kp.a0 = (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma);
  kp.npts = npts;
  kp.full = gauss_jacobi(npts, kp.bexp, kp.bexp);
  kp.left = gauss_jacobi(npts, 0.0, kp.bexp);
  kp.right = gauss_jacobi(npts, kp.bexp, 0.0);
  // c_norm = Gamma(b+3/2) / (sqrt(pi) Gamma(b+1))
  kp.c_norm = std::exp(std::lgamma(kp.bexp + 1.5) - std::lgamma(kp.bexp + 1.0)) /
              std::sqrt(std::numbers::pi);
  return kp;
}

namespace detail {

/// Integral of F(sigma) (1-sigma^2)^bexp over [-1,1] where F may have a kink
/// at sigma_star.  When the kink lies inside the interval, each side is mapped
/// onto a one-sided Jacobi rule carrying the singular endpoint factor.
template <class F>
inline double kernel_integral_kinked(const KernelParams& kp, double sigma_star, F&& f) {
  if (!(sigma_star > -1.0 + 1e-12) || !(sigma_star < 1.0 - 1e-12)) return kp.full.integrate(f);
  const double b = kp.bexp;
  double sum = 0.0;
  {  // [-1, sigma_star]: sigma = -1 + (1+sigma*)(1+xi)/2, rule weight (1+xi)^b
    const double half = 0.5 * (1.0 + sigma_star);
    const double pre = std::pow(half, b + 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < kp.left.nodes.size(); ++i) {
      const double xi = kp.left.nodes[i];
      const double sg = -1.0 + half * (1.0 + xi);
      s += kp.left.weights[i] * f(sg) * std::pow(1.0 - sg, b);
    }
    sum += pre * s;
  }
  {  // [sigma_star, 1]: sigma = 1 - (1-sigma*)(1-xi)/2, rule weight (1-xi)^b
    const double half = 0.5 * (1.0 - sigma_star);
    const double pre = std::pow(half, b + 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < kp.right.nodes.size(); ++i) {
      const double xi = kp.right.nodes[i];
      const double sg = 1.0 - half * (1.0 - xi);
      s += kp.right.weights[i] * f(sg) * std::pow(1.0 + sg, b);
    }
    sum += pre * s;
  }
  return sum;
}

}  // namespace detail

struct PairValue {
  double eta = 0.0;
  double q = 0.0;
};

struct EntropyEval {
  double eta = 0.0;
  double q = 0.0;
  double eta_rho = 0.0;
  double eta_m = 0.0;
};

/// Entropy pair for a smooth test function psi.
template <class Psi>
inline PairValue eval_pair(const KernelParams& kp, Psi&& psi, double rho, double u) {
  if (rho < 0.0) throw invalid_argument("eval_pair: rho must be >= 0");
  if (rho == 0.0) return {};
  const double rt = std::pow(rho, kp.theta);
  double eta = 0.0, q = 0.0;
  for (std::size_t i = 0; i < kp.full.nodes.size(); ++i) {
    const double sg = kp.full.nodes[i];
    const double w = kp.full.weights[i];
    const double ps = psi(u + rt * sg);
    eta += w * ps;
    q += w * (u + kp.theta * rt * sg) * ps;
  }
  return {kp.c_norm * rho * eta, kp.c_norm * rho * q};
}

/// Entropy pair plus the partial derivatives (eta_rho, eta_m); needs psi'.
template <class Psi, class DPsi>
inline EntropyEval eval_pair_derivs(const KernelParams& kp, Psi&& psi, DPsi&& dpsi, double rho,
                                    double u) {
  if (rho < 0.0) throw invalid_argument("eval_pair_derivs: rho must be >= 0");
  if (rho == 0.0) return {};
  const double rt = std::pow(rho, kp.theta);
  double eta = 0.0, q = 0.0, er = 0.0, em = 0.0;
  for (std::size_t i = 0; i < kp.full.nodes.size(); ++i) {
    const double sg = kp.full.nodes[i];
    const double w = kp.full.weights[i];
    const double s = u + rt * sg;
    const double ps = psi(s), dps = dpsi(s);
    eta += w * ps;
    q += w * (u + kp.theta * rt * sg) * ps;
    em += w * dps;
    er += w * (ps + dps * (-u + kp.theta * rt * sg));
  }
  EntropyEval out;
  out.eta = kp.c_norm * rho * eta;
  out.q = kp.c_norm * rho * q;
  out.eta_m = kp.c_norm * em;
  out.eta_rho = kp.c_norm * er;
  return out;
}

/// Mechanical energy pair (psi = s^2/2) in closed form:
/// eta* = m^2/(2 rho) + rho e(rho),  q* = m^3/(2 rho^2) + m (rho e(rho))'.
inline PairValue mechanical_pair(const KernelParams& kp, double rho, double u) {
  if (rho < 0.0) throw invalid_argument("mechanical_pair: rho must be >= 0");
  if (rho == 0.0) return {};
  const double e = kp.a0 / (kp.gamma - 1.0) * std::pow(rho, kp.gamma - 1.0);
  const double dre = kp.a0 * kp.gamma / (kp.gamma - 1.0) * std::pow(rho, kp.gamma - 1.0);
  return {0.5 * rho * u * u + rho * e, 0.5 * rho * u * u * u + rho * u * dre};
}

inline PairValue mechanical_pair(const ModelParams& mp, double rho, double u) {
  if (rho < 0.0) throw invalid_argument("mechanical_pair: rho must be >= 0");
  if (rho == 0.0) return {};
  const double e = mp.internal_energy(rho);
  const double dre = mp.a0 * mp.gamma / (mp.gamma - 1.0) * std::pow(rho, mp.gamma - 1.0);
  return {0.5 * rho * u * u + rho * e, 0.5 * rho * u * u * u + rho * u * dre};
}

/// Pair generated by psi = s|s|/2, with its (rho, m) partial derivatives.
/// The |.| kink at sigma = -u/rho^theta is handled by the split rule.
inline EntropyEval sharp_pair(const KernelParams& kp, double rho, double u) {
  if (rho < 0.0) throw invalid_argument("sharp_pair: rho must be >= 0");
  if (rho == 0.0) return {};
  const double rt = std::pow(rho, kp.theta);
  const double sigma_star = -u / rt;
  const double th = kp.theta;
  EntropyEval out;
  out.eta = kp.c_norm * rho *
            detail::kernel_integral_kinked(kp, sigma_star, [&](double sg) {
              const double s = u + rt * sg;
              return 0.5 * s * std::abs(s);
            });
  out.q = kp.c_norm * rho *
          detail::kernel_integral_kinked(kp, sigma_star, [&](double sg) {
            const double s = u + rt * sg;
            return 0.5 * (u + th * rt * sg) * s * std::abs(s);
          });
  out.eta_m = kp.c_norm * detail::kernel_integral_kinked(kp, sigma_star, [&](double sg) {
    return std::abs(u + rt * sg);
  });
  out.eta_rho = kp.c_norm * detail::kernel_integral_kinked(kp, sigma_star, [&](double sg) {
    return (-0.5 * u + (th + 0.5) * rt * sg) * std::abs(u + rt * sg);
  });
  return out;
}

struct CancellationEval {
  double difference = 0.0;  // q# - u eta#
  double I1 = 0.0;          // (theta/2) rho^{1+2theta} <sigma^2 |u+rho^theta sigma|>
  double I2 = 0.0;          // (theta/2) rho^{1+theta} u <sigma |u+rho^theta sigma|>
  double bound = 0.0;       // rho^gamma |u| + rho^{gamma+theta}
};

/// Boundary cancellation q# - u eta#, split into its two moments.  I2
/// vanishes identically at u = 0.
inline CancellationEval cancellation(const KernelParams& kp, double rho, double u) {
  if (rho < 0.0) throw invalid_argument("cancellation: rho must be >= 0");
  CancellationEval out;
  if (rho == 0.0) return out;
  const double rt = std::pow(rho, kp.theta);
  const double sigma_star = -u / rt;
  const double m1 = detail::kernel_integral_kinked(
      kp, sigma_star, [&](double sg) { return sg * sg * std::abs(u + rt * sg); });
  const double m2 = detail::kernel_integral_kinked(
      kp, sigma_star, [&](double sg) { return sg * std::abs(u + rt * sg); });
  out.I1 = kp.c_norm * 0.5 * kp.theta * std::pow(rho, 1.0 + 2.0 * kp.theta) * m1;
  out.I2 = kp.c_norm * 0.5 * kp.theta * std::pow(rho, 1.0 + kp.theta) * u * m2;
  out.difference = out.I1 + out.I2;
  out.bound = std::pow(rho, kp.gamma) * std::abs(u) + std::pow(rho, kp.gamma + kp.theta);
  return out;
}

}  // namespace cnsp
