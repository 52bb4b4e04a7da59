#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cnsp/constants.hpp"
#include "cnsp/errors.hpp"
#include "cnsp/interp.hpp"
#include "cnsp/io.hpp"
#include "cnsp/quadrature.hpp"

namespace cnsp {

// ---------------------------------------------------------------------------
// Radial profiles
// ---------------------------------------------------------------------------

/// Raw radial initial data (rho0, m0) as callables, with a support bound for
/// the density (rho0 == 0 beyond `support`; support <= 0 means none known).
struct RadialProfile {
  std::function<double(double)> rho0;
  std::function<double(double)> m0;
  double support = 0.0;
};

inline RadialProfile preset_uniform_ball(int n, double omega_n, double radius, double M) {
  const double c = n * M / (omega_n * std::pow(radius, n));
  return {[c, radius](double r) { return r <= radius ? c : 0.0; },
          [](double) { return 0.0; }, radius};
}

inline RadialProfile preset_gaussian(int n, double omega_n, double sigma, double M) {
  // M = omega_n c int_0^inf e^{-r^2/(2 sigma^2)} r^{n-1} dr
  //   = omega_n c 2^{n/2-1} sigma^n Gamma(n/2)
  const double c =
      M / (omega_n * std::pow(2.0, 0.5 * n - 1.0) * std::pow(sigma, n) * std::tgamma(0.5 * n));
  const double s2 = 2.0 * sigma * sigma;
  return {[c, s2](double r) { return c * std::exp(-r * r / s2); }, [](double) { return 0.0; },
          0.0};
}

/// Truncated power-law bump rho = c (1-(r/R)^2)_+^k.
inline RadialProfile preset_power_bump(int n, double omega_n, double radius, double k, double M) {
  // int_0^R (1-(r/R)^2)^k r^{n-1} dr = R^n B(n/2, k+1) / 2
  const double beta = std::exp(std::lgamma(0.5 * n) + std::lgamma(k + 1.0) -
                               std::lgamma(0.5 * n + k + 1.0));
  const double c = 2.0 * M / (omega_n * std::pow(radius, n) * beta);
  return {[c, radius, k](double r) {
            const double t = 1.0 - (r / radius) * (r / radius);
            return t > 0.0 ? c * std::pow(t, k) : 0.0;
          },
          [](double) { return 0.0; }, radius};
}

/// Profile from sampled (r, rho0, m0) columns; samples are interpolated
/// monotone-cubically and extended by zero beyond the last node.
inline RadialProfile profile_from_table(std::vector<double> r, std::vector<double> rho0,
                                        std::vector<double> m0) {
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    if (rho0[i] < 0.0) throw invalid_argument("profile table: rho0 must be >= 0");
    if (rho0[i] == 0.0 && m0[i] != 0.0)
      throw invalid_argument("profile table: m0 must vanish on vacuum");
  }
  const double rmax = r.back();
  auto ri = std::make_shared<MonotoneCubic>(r, std::move(rho0));
  auto mi = std::make_shared<MonotoneCubic>(std::move(r), std::move(m0));
  return {[ri, rmax](double x) { return x > rmax ? 0.0 : std::max(0.0, (*ri)(x)); },
          [mi, rmax](double x) { return x > rmax ? 0.0 : (*mi)(x); }, rmax};
}

/// Sampled raw profile with its quadrature mass.
struct InitialProfile {
  std::vector<double> r;
  std::vector<double> rho0;
  std::vector<double> m0;
  double M = 0.0;
};

inline InitialProfile sample_profile(const RadialProfile& p, const ModelParams& par, double rmax,
                                     int npts) {
  InitialProfile out;
  out.r.resize(npts);
  out.rho0.resize(npts);
  out.m0.resize(npts);
  const double h = rmax / (npts - 1);
  for (int i = 0; i < npts; ++i) {
    out.r[i] = i * h;
    out.rho0[i] = p.rho0(out.r[i]);
    out.m0[i] = p.m0(out.r[i]);
  }
  std::vector<double> integ(npts);
  for (int i = 0; i < npts; ++i) integ[i] = out.rho0[i] * std::pow(out.r[i], par.n - 1);
  out.M = par.omega_n * simpson_uniform(integ, h);
  return out;
}

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

/// The standard bump J(x) = c exp(-1/(1-|x|^2)) on the unit ball of R^n,
/// normalized to unit integral, together with the radialized convolution
/// kernel K_delta(r,s) = int_{S^{n-1}} J_delta(r e - s w) dw.  Convolving in
/// R^n (rather than in the radius) keeps the L^p properties of the data, so
/// the kernel is the spherical average of the bump; for n = 3 it reduces to a
/// 1-D primitive of the bump profile.
class Mollifier {
public:
  explicit Mollifier(int n) : n_(n) {
    if (n < 1) throw invalid_argument("Mollifier: n >= 1");
    // normalize: 1 = omega_n c int_0^1 exp(-1/(1-t^2)) t^{n-1} dt
    const double raw = adaptive_simpson(
        [n](double t) { return bump_raw(t) * std::pow(t, n - 1); }, 0.0, 1.0, 1e-15);
    norm_ = 1.0 / (unit_sphere_area(n) * raw);
    if (n_ == 3) {
      // primitive Q(t) = int_0^t J(tau) tau dtau on a dense table
      const int m = 16385;
      std::vector<double> ts(m), q(m);
      const double h = 1.0 / (m - 1);
      for (int i = 0; i < m; ++i) ts[i] = i * h;
      q[0] = 0.0;
      for (int i = 1; i < m; ++i)
        q[i] = q[i - 1] + gauss5([this](double t) { return norm_ * bump_raw(t) * t; },
                                 ts[i - 1], ts[i]);
      q_total_ = q.back();
      q_table_ = MonotoneCubic(std::move(ts), std::move(q));
    }
  }

  int dim() const { return n_; }

  double bump(double t) const { return norm_ * bump_raw(t); }

  /// K_delta(r, s); vanishes unless |r-s| < delta.
  double kernel(double r, double s, double delta) const {
    if (std::abs(r - s) >= delta) return 0.0;
    if (r < 1e-300) return unit_sphere_area(n_) * bump(s / delta) / std::pow(delta, n_);
    if (s < 1e-300) return unit_sphere_area(n_) * bump(r / delta) / std::pow(delta, n_);
    if (n_ == 3) {
      const double t1 = std::abs(r - s) / delta;
      const double t2 = std::min((r + s) / delta, 1.0);
      return 2.0 * std::numbers::pi / (r * s * delta) * (q_eval(t2) - q_eval(t1));
    }
    // general n: angular quadrature over the sphere
    const double c = unit_sphere_area(n_ - 1);
    return c * adaptive_simpson(
                   [&](double phi) {
                     const double q =
                         std::sqrt(std::max(0.0, r * r + s * s - 2.0 * r * s * std::cos(phi)));
                     return bump(q / delta) / std::pow(delta, n_) *
                            std::pow(std::sin(phi), n_ - 2);
                   },
                   0.0, std::numbers::pi, 1e-13);
  }

  /// Radial n-dimensional convolution (f * J_delta)(r) for radial f:
  /// int_0^inf f(s) K_delta(r,s) s^{n-1} ds.
  double convolve(const std::function<double(double)>& f, double r, double delta,
                  double tol = 1e-11) const {
    const double lo = std::max(0.0, r - delta);
    const double hi = r + delta;
    auto g = [&](double s) { return f(s) * kernel(r, s, delta) * std::pow(s, n_ - 1); };
    if (r < delta) {  // kernel primitive has a kink where r + s = delta
      const double mid = delta - r;
      return adaptive_simpson(g, lo, mid, 0.5 * tol) + adaptive_simpson(g, mid, hi, 0.5 * tol);
    }
    return adaptive_simpson(g, lo, hi, tol);
  }

private:
  static double bump_raw(double t) {
    const double d = 1.0 - t * t;
    return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
  }
  double q_eval(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return q_total_;
    return q_table_(t);
  }

  int n_;
  double norm_ = 1.0;
  double q_total_ = 0.0;
  MonotoneCubic q_table_;
};

/// Smooth cutoff: 0 on (-inf,0], 1 on [1,inf), strictly increasing between.
inline double smooth_cutoff(double z) {
  auto sig = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = sig(z), b = sig(1.0 - z);
  if (a == 0.0) return 0.0;
  if (b == 0.0) return 1.0;
  return a / (a + b);
}

/// Boundary decay exponent alpha = min{1/2, (1-1/gamma) n}.
inline double boundary_decay_exponent(const ModelParams& p) {
  return std::min(0.5, (1.0 - 1.0 / p.gamma) * p.n);
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// Smoothed, truncated, mass-renormalized data on [1/b, b], ready for the
/// free-boundary solver, plus its seed energies and compatibility residuals.
struct ApproxData {
  double eps = 0.0;
  double b = 0.0;
  double a = 0.0;      // inner radius 1/b
  double alpha = 0.0;  // boundary decay exponent
  double M = 0.0;      // total mass (renormalized quadrature value)
  std::vector<double> r;
  std::vector<double> rho;
  std::vector<double> u;
  double E0 = 0.0;
  double E1 = 0.0;
  double residual_stress = 0.0;
  double residual_u_inner = 0.0;
};

struct InitDataOptions {
  int dense_n = 8193;    // pipeline grid resolution on [a, b]
  double quad_tol = 1e-11;
};

/// Mollified density on R_+ (pre-truncation step):
/// rho(r) = ( (sqrt(rho0) * J_delta)(r) + eps exp(-r^2) )^2 with delta=sqrt(eps).
inline double mollified_density(const Mollifier& mol, const RadialProfile& prof, double eps,
                                double r) {
  if (!(eps > 0.0)) throw invalid_argument("mollified_density: eps must be > 0");
  const double delta = std::sqrt(eps);
  auto fsqrt = [&](double s) { return std::sqrt(std::max(0.0, prof.rho0(s))); };
  const double conv = mol.convolve(fsqrt, r, delta);
  const double s = conv + eps * std::exp(-r * r);
  return s * s;
}

/// Scale density samples so that omega_n * int rho r^{n-1} dr == M.
/// Returns the applied scalar.
inline double renormalize_mass(std::vector<double>& rho, const std::vector<double>& r,
                               const ModelParams& par, double M) {
  std::vector<double> integ(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) integ[i] = rho[i] * std::pow(r[i], par.n - 1);
  const double mass = par.omega_n * simpson_uniform(integ, r[1] - r[0]);
  if (!(mass > 0.0)) throw invalid_argument("renormalize_mass: zero-mass input");
  const double scale = M / mass;
  for (auto& v : rho) v *= scale;
  return scale;
}

/// Outer boundary taper: matches rho at r <= b-1 and b^{-(n-alpha)} at r = b.
inline double taper_boundary_value(double rho_val, double r, double b, double alpha, int n) {
  const double s = smooth_cutoff(2.0 * (r - (b - 1.0)));
  const double mixed = std::sqrt(std::max(0.0, rho_val)) * (1.0 - s) +
                       std::pow(b, -0.5 * (n - alpha)) * s;
  return mixed * mixed;
}

/// Full construction of the approximate initial data on [1/b, b].
inline ApproxData build_approx_data(const RadialProfile& prof, const ModelParams& par, double b,
                                    const InitDataOptions& opt = {}) {
  if (!(b >= 4.0)) throw invalid_argument("build_approx_data: b must be >= 4");
  if (!(par.eps > 0.0)) throw invalid_argument("build_approx_data: eps must be > 0");
  const Mollifier mol(par.n);
  const int n = par.n;
  const double eps = par.eps;
  const double delta = std::sqrt(eps);
  const double a = 1.0 / b;

  ApproxData out;
  out.eps = eps;
  out.b = b;
  out.a = a;
  out.alpha = boundary_decay_exponent(par);

  // mass of the raw profile
  const double r_lim = prof.support > 0.0 ? prof.support : 64.0;
  const double M =
      par.omega_n * adaptive_simpson_panels(
                        [&](double s) { return prof.rho0(s) * std::pow(s, n - 1); }, 0.0, r_lim,
                        opt.quad_tol);
  if (!(M > 0.0)) throw invalid_argument("build_approx_data: profile has zero mass");
  out.M = M;

  const int m = opt.dense_n;
  out.r.resize(m);
  const double h = (b - a) / (m - 1);
  for (int i = 0; i < m; ++i) out.r[i] = a + i * h;

  // mollify sqrt(rho0) in R^n, add the positive floor, square
  auto fsqrt = [&](double s) { return std::sqrt(std::max(0.0, prof.rho0(s))); };
  std::vector<double> sq(m);
  for (int i = 0; i < m; ++i)
    sq[i] = mol.convolve(fsqrt, out.r[i], delta) + eps * std::exp(-out.r[i] * out.r[i]);
  std::vector<double> rho(m);
  for (int i = 0; i < m; ++i) rho[i] = sq[i] * sq[i];

  // global renormalization (the mollified data live on all of R_+, so the
  // integral extends past b where the Gaussian floor is negligible)
  {
    const double rmax =
        std::max({(prof.support > 0 ? prof.support : r_lim) + delta + 1.0, 6.0, b});
    auto mollified = [&](double s) {
      const double v = mol.convolve(fsqrt, s, delta) + eps * std::exp(-s * s);
      return v * v * std::pow(s, n - 1);
    };
    const double mass_out =
        par.omega_n * (adaptive_simpson_panels(mollified, 0.0, a, opt.quad_tol, 0.1) +
                       adaptive_simpson_panels(mollified, b, rmax + 2.0, opt.quad_tol));
    std::vector<double> integ(m);
    for (int i = 0; i < m; ++i) integ[i] = rho[i] * std::pow(out.r[i], n - 1);
    const double mass_in = par.omega_n * simpson_uniform(integ, h);
    const double scale = M / (mass_in + mass_out);
    for (auto& v : rho) v *= scale;
  }

  // outer taper, then final renormalization on [a, b]
  for (int i = 0; i < m; ++i)
    rho[i] = taper_boundary_value(rho[i], out.r[i], b, out.alpha, n);
  renormalize_mass(rho, out.r, par, M);
  out.rho = rho;

  // velocity: mollified compactly-supported raw velocity ...
  const double dv = 1.0 / b;
  auto graw = [&](double s) {
    if (s < 4.0 / b || s > b - 2.0) return 0.0;  // indicator window
    const double rh = prof.rho0(s);
    return rh > 0.0 ? prof.m0(s) / std::sqrt(rh) : 0.0;
  };
  out.u.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double ri = out.r[i];
    if (ri < 2.0 / b || ri > b - 1.0) continue;  // outside the mollified support
    out.u[i] = mol.convolve(graw, ri, dv) / std::sqrt(rho[i]);
  }
  // ... minus the stress-free boundary correction
  std::vector<double> pint(m, 0.0);  // int_r^b p(rho)/rho z^{n-1} dz
  {
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i)
      g[i] = par.pressure(rho[i]) / rho[i] * std::pow(out.r[i], n - 1);
    for (int i = m - 2; i >= 0; --i) pint[i] = pint[i + 1] + 0.5 * h * (g[i] + g[i + 1]);
  }
  for (int i = 0; i < m; ++i) {
    const double s4 = smooth_cutoff(4.0 * (out.r[i] - (b - 0.5)));
    if (s4 > 0.0)
      out.u[i] -= s4 / eps * std::pow(out.r[i], -(n - 1.0)) * pint[i];
  }

  // seed energies
  {
    std::vector<double> e0(m), e1(m);
    std::vector<double> cum;
    if (par.kappa == -1) cum = cumulative_mass_integral(out.r, rho, n);
    for (int i = 0; i < m; ++i) {
      const double rn1 = std::pow(out.r[i], n - 1);
      double v = rho[i] * (0.5 * out.u[i] * out.u[i] + par.internal_energy(rho[i]));
      if (par.kappa == -1) {
        const double field = cum[i] / rn1;
        v += 0.5 * field * field;
      }
      e0[i] = v * rn1;
    }
    // d(sqrt(rho))/dr by 4th-order centered differences
    std::vector<double> sr(m);
    for (int i = 0; i < m; ++i) sr[i] = std::sqrt(rho[i]);
    for (int i = 0; i < m; ++i) {
      double d;
      if (i >= 2 && i + 2 < m)
        d = (-sr[i + 2] + 8.0 * sr[i + 1] - 8.0 * sr[i - 1] + sr[i - 2]) / (12.0 * h);
      else if (i == 0)
        d = (-3.0 * sr[0] + 4.0 * sr[1] - sr[2]) / (2.0 * h);
      else if (i == m - 1)
        d = (3.0 * sr[m - 1] - 4.0 * sr[m - 2] + sr[m - 3]) / (2.0 * h);
      else if (i == 1)
        d = (sr[2] - sr[0]) / (2.0 * h);
      else
        d = (sr[m - 1] - sr[m - 3]) / (2.0 * h);
      e1[i] = d * d * std::pow(out.r[i], n - 1);
    }
    out.E0 = par.omega_n * simpson_uniform(e0, h);
    out.E1 = eps * eps * par.omega_n * simpson_uniform(e1, h);
  }
  return out;
}

/// Seed energies of arbitrary (r, rho, u) data per the kappa-dependent
/// definition (field energy included for plasmas).
inline std::pair<double, double> seed_energies(const std::vector<double>& r,
                                               const std::vector<double>& rho,
                                               const std::vector<double>& u,
                                               const ModelParams& par, double eps) {
  const int m = static_cast<int>(r.size());
  const double h = r[1] - r[0];
  std::vector<double> e0(m), e1(m), sr(m);
  std::vector<double> cum;
  if (par.kappa == -1) cum = cumulative_mass_integral(r, rho, par.n);
  for (int i = 0; i < m; ++i) {
    const double rn1 = std::pow(r[i], par.n - 1);
    double v = rho[i] * (0.5 * u[i] * u[i] + par.internal_energy(rho[i]));
    if (par.kappa == -1) {
      const double field = cum[i] / rn1;
      v += 0.5 * field * field;
    }
    e0[i] = v * rn1;
    sr[i] = std::sqrt(std::max(0.0, rho[i]));
  }
  for (int i = 0; i < m; ++i) {
    double d;
    if (i >= 2 && i + 2 < m)
      d = (-sr[i + 2] + 8.0 * sr[i + 1] - 8.0 * sr[i - 1] + sr[i - 2]) / (12.0 * h);
    else if (i == 0)
      d = (-3.0 * sr[0] + 4.0 * sr[1] - sr[2]) / (2.0 * h);
    else if (i == m - 1)
      d = (3.0 * sr[m - 1] - 4.0 * sr[m - 2] + sr[m - 3]) / (2.0 * h);
    else
      d = (sr[std::min(i + 1, m - 1)] - sr[i - 1]) / (2.0 * h);
    e1[i] = d * d * std::pow(r[i], par.n - 1);
  }
  return {par.omega_n * simpson_uniform(e0, h), eps * eps * par.omega_n * simpson_uniform(e1, h)};
}

struct CompatibilityResiduals {
  double u_inner = 0.0;        // |u(a)|
  double stress_at_b = 0.0;    // p - eps rho (u_r + (n-1) u / r) at r = b
};

/// Measurement of the boundary compatibility conditions; one-sided 5-point
/// differences for u_r at the outer edge.
inline CompatibilityResiduals verify_compatibility(const ApproxData& d, const ModelParams& par) {
  CompatibilityResiduals res;
  const int m = static_cast<int>(d.r.size());
  if (m < 5) throw invalid_argument("verify_compatibility: need >= 5 samples");
  const double h = d.r[1] - d.r[0];
  res.u_inner = std::abs(d.u.front());
  const double ur_b = (25.0 * d.u[m - 1] - 48.0 * d.u[m - 2] + 36.0 * d.u[m - 3] -
                       16.0 * d.u[m - 4] + 3.0 * d.u[m - 5]) /
                      (12.0 * h);
  const double rho_b = d.rho[m - 1], u_b = d.u[m - 1];
  res.stress_at_b = par.pressure(rho_b) -
                    par.eps * rho_b * (ur_b + (par.n - 1) * u_b / d.b);
  return res;
}

}  // namespace cnsp
