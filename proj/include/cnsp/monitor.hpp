#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cnsp/constants.hpp"
#include "cnsp/fields.hpp"
#include "cnsp/solver.hpp"

namespace cnsp {

/// Edge quadrature weights in mass coordinate (trapezoidal: half cells at the
/// ends); sum equals M/omega_n.
inline std::vector<double> edge_weights(const LagrangianState& st) {
  const int N = st.cells();
  std::vector<double> w(N + 1);
  w[0] = 0.5 * (st.x[1] - st.x[0]);
  for (int j = 1; j < N; ++j) w[j] = 0.5 * (st.x[j + 1] - st.x[j - 1]);
  w[N] = 0.5 * (st.x[N] - st.x[N - 1]);
  return w;
}

/// Mass-coordinate density slope at edges (centered differences interior,
/// one-sided at the two boundary edges).
inline std::vector<double> density_slope_edges(const LagrangianState& st) {
  const int N = st.cells();
  std::vector<double> s(N + 1);
  for (int j = 1; j < N; ++j)
    s[j] = (st.rho[j] - st.rho[j - 1]) / (0.5 * (st.x[j + 1] - st.x[j - 1]));
  s[0] = (N > 1) ? (st.rho[1] - st.rho[0]) / (0.5 * (st.x[2] - st.x[0])) : 0.0;
  s[N] = (N > 1) ? (st.rho[N - 1] - st.rho[N - 2]) / (0.5 * (st.x[N] - st.x[N - 2])) : 0.0;
  return s;
}

namespace detail {
inline double edge_weight(const LagrangianState& st, int j) {
  const int N = st.cells();
  if (j == 0) return 0.5 * (st.x[1] - st.x[0]);
  if (j == N) return 0.5 * (st.x[N] - st.x[N - 1]);
  return 0.5 * (st.x[j + 1] - st.x[j - 1]);
}
inline double edge_density_slope(const LagrangianState& st, int j) {
  const int N = st.cells();
  if (j == 0) return (st.rho[1] - st.rho[0]) / (0.5 * (st.x[2] - st.x[0]));
  if (j == N) return (st.rho[N - 1] - st.rho[N - 2]) / (0.5 * (st.x[N] - st.x[N - 2]));
  return (st.rho[j] - st.rho[j - 1]) / (0.5 * (st.x[j + 1] - st.x[j - 1]));
}
}  // namespace detail

/// Energy functional of the basic balance law (omega_n-scaled):
/// omega_n { int (u^2/2 + e(rho)) dx - kappa/(n-2) int x r^{2-n} dx }.
inline double energy_functional(const LagrangianState& st) {
  const int N = st.cells();
  double kin = 0.0, grav = 0.0, eint = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double w = detail::edge_weight(st, j);
    kin += 0.5 * st.u[j] * st.u[j] * w;
    grav += st.x[j] / ipow(st.r[j], st.par.n - 2) * w;
  }
  for (int j = 0; j < N; ++j)
    eint += st.par.internal_energy(st.rho[j]) * (st.x[j + 1] - st.x[j]);
  return st.par.omega_n * (kin + eint - st.par.kappa / (st.par.n - 2.0) * grav);
}

/// Instantaneous dissipation + boundary flux of the basic balance law
/// (omega_n-scaled): eps int (rho^2 (r^{n-1} u_x)^2 + (n-1) u^2/r^2) dx
/// + eps (n-1) (rho u^2 r^{n-2}) at the outer edge.
inline double energy_dissipation(const LagrangianState& st) {
  const int N = st.cells();
  const ModelParams& p = st.par;
  double visc = 0.0, geom = 0.0;
  for (int j = 0; j < N; ++j) {
    const double dx = st.x[j + 1] - st.x[j];
    const double rc = 0.5 * (st.r[j] + st.r[j + 1]);
    const double ux = (st.u[j + 1] - st.u[j]) / dx;
    const double t = st.rho[j] * ipow(rc, p.n - 1) * ux;
    visc += t * t * dx;
  }
  for (int j = 0; j <= N; ++j) {
    const double t = st.u[j] / st.r[j];
    geom += t * t * detail::edge_weight(st, j);
  }
  const double bflux =
      (p.n - 1) * st.rho[N - 1] * st.u[N] * st.u[N] * ipow(st.r[N], p.n - 2);
  return p.omega_n * p.eps * (visc + (p.n - 1) * geom + bflux);
}

/// Cumulative defect of the discrete energy balance, trapezoidal in time
/// between sampled states.
class EnergyBalanceAccumulator {
public:
  void start(const LagrangianState& st) {
    last_f_ = energy_functional(st);
    last_d_ = energy_dissipation(st);
    last_tau_ = st.tau;
    started_ = true;
  }
  void sample(const LagrangianState& st) {
    if (!started_) throw invalid_argument("EnergyBalanceAccumulator: start() first");
    if (!(st.tau > last_tau_)) return;
    const double f = energy_functional(st);
    const double d = energy_dissipation(st);
    residual_ += (f - last_f_) + 0.5 * (st.tau - last_tau_) * (d + last_d_);
    last_f_ = f;
    last_d_ = d;
    last_tau_ = st.tau;
  }
  double residual() const { return residual_; }

private:
  bool started_ = false;
  double residual_ = 0.0, last_f_ = 0.0, last_d_ = 0.0, last_tau_ = 0.0;
};

/// BD functional (plain Lagrangian units):
/// int (u + eps r^{n-1} rho_x)^2/2 dx + int e(rho) dx
/// - kappa/(n-2) int x r^{2-n} dx + p(rho_b) b(tau)^n / n.
inline double bd_quantity(const LagrangianState& st) {
  const int N = st.cells();
  const ModelParams& p = st.par;
  double eff = 0.0, grav = 0.0, eint = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double w = detail::edge_weight(st, j);
    const double v = st.u[j] + p.eps * ipow(st.r[j], p.n - 1) * detail::edge_density_slope(st, j);
    eff += 0.5 * v * v * w;
    grav += st.x[j] / ipow(st.r[j], p.n - 2) * w;
  }
  for (int j = 0; j < N; ++j) eint += p.internal_energy(st.rho[j]) * (st.x[j + 1] - st.x[j]);
  return eff + eint - p.kappa / (p.n - 2.0) * grav +
         p.pressure(st.rho[N - 1]) * ipow(st.r[N], p.n) / p.n;
}

/// Dissipation, boundary sink and source terms of the BD balance law
/// (mass-coordinate transcription): returns
///   eps int p'(rho) rho_x^2 r^{2(n-1)} dx
/// + p(rho_b) p'(rho_b) b^n / (n eps)
/// - eps kappa ( int rho dx - (M/omega_n) rho_b ).
inline double bd_dissipation(const LagrangianState& st) {
  const int N = st.cells();
  const ModelParams& p = st.par;
  double diss = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double rho_e =
        (j == 0) ? st.rho[0] : (j == N ? st.rho[N - 1] : 0.5 * (st.rho[j - 1] + st.rho[j]));
    const double sl = detail::edge_density_slope(st, j);
    diss += p.dpressure(rho_e) * sl * sl * ipow(st.r[j], 2 * (p.n - 1)) *
            detail::edge_weight(st, j);
  }
  double mass_int = 0.0;
  for (int j = 0; j < N; ++j) mass_int += st.rho[j] * (st.x[j + 1] - st.x[j]);
  const double rho_b = st.rho[N - 1];
  const double bterm =
      p.pressure(rho_b) * p.dpressure(rho_b) * ipow(st.r[N], p.n) / (p.n * p.eps);
  const double source = p.eps * p.kappa * (mass_int - st.x[N] * rho_b);
  return p.eps * diss + bterm - source;
}

/// Radial-coordinate form of the BD density dissipation,
/// (3 a0 eps / gamma) int |(rho^{gamma/2})_r|^2 r^{n-1} dr, written to the
/// ledger alongside the mass-coordinate transcription.
inline double bd_dissipation_radial(const LagrangianState& st) {
  const int N = st.cells();
  const ModelParams& p = st.par;
  double diss = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double rho_e =
        (j == 0) ? st.rho[0] : (j == N ? st.rho[N - 1] : 0.5 * (st.rho[j - 1] + st.rho[j]));
    // rho_r = rho_x * rho r^{n-1}; |(rho^{g/2})_r|^2 = (g/2)^2 rho^{g-2} rho_r^2
    const double rho_r = detail::edge_density_slope(st, j) * rho_e * ipow(st.r[j], p.n - 1);
    const double t = 0.5 * p.gamma * std::pow(rho_e, 0.5 * p.gamma - 1.0) * rho_r;
    // back to radial measure: dx = rho r^{n-1} dr
    diss += t * t * detail::edge_weight(st, j) / rho_e;
  }
  return 3.0 * p.a0 * p.eps / p.gamma * diss;
}

/// Cumulative defect of the BD balance, trapezoidal in time between samples.
class BdBalanceAccumulator {
public:
  void start(const LagrangianState& st) {
    last_f_ = bd_quantity(st);
    last_d_ = bd_dissipation(st);
    last_tau_ = st.tau;
    started_ = true;
  }
  void sample(const LagrangianState& st) {
    if (!started_) throw invalid_argument("BdBalanceAccumulator: start() first");
    if (!(st.tau > last_tau_)) return;
    const double f = bd_quantity(st);
    const double d = bd_dissipation(st);
    residual_ += (f - last_f_) + 0.5 * (st.tau - last_tau_) * (d + last_d_);
    last_f_ = f;
    last_d_ = d;
    last_tau_ = st.tau;
  }
  double residual() const { return residual_; }

private:
  bool started_ = false;
  double residual_ = 0.0, last_f_ = 0.0, last_d_ = 0.0, last_tau_ = 0.0;
};

/// Running higher-integrability accumulators over a fixed radial window
/// [d, D]: int int_K rho^{gamma+1} dr dt and
/// int int_K (rho |u|^3 + rho^{gamma+theta}) r^{n-1} dr dt.
class HigherIntegrabilityAccumulator {
public:
  HigherIntegrabilityAccumulator(double d, double D) : d_(d), D_(D) {}

  void start(const LagrangianState& st) {
    last_den_ = density_integrand(st);
    last_vel_ = velocity_integrand(st);
    last_tau_ = st.tau;
    started_ = true;
  }
  void sample(const LagrangianState& st) {
    if (!started_) throw invalid_argument("HigherIntegrabilityAccumulator: start() first");
    if (!(st.tau > last_tau_)) return;
    const double den = density_integrand(st);
    const double vel = velocity_integrand(st);
    const double dt = st.tau - last_tau_;
    den_ += 0.5 * dt * (den + last_den_);
    vel_ += 0.5 * dt * (vel + last_vel_);
    last_den_ = den;
    last_vel_ = vel;
    last_tau_ = st.tau;
  }
  double density_value() const { return den_; }
  double velocity_value() const { return vel_; }

private:
  double density_integrand(const LagrangianState& st) const {
    double s = 0.0;
    for (int j = 0; j < st.cells(); ++j) {
      const double lo = std::max(st.r[j], d_), hi = std::min(st.r[j + 1], D_);
      if (hi <= lo) continue;
      s += std::pow(st.rho[j], st.par.gamma + 1.0) * (hi - lo);
    }
    return s;
  }
  double velocity_integrand(const LagrangianState& st) const {
    const double th = st.par.theta;
    double s = 0.0;
    for (int j = 0; j < st.cells(); ++j) {
      const double lo = std::max(st.r[j], d_), hi = std::min(st.r[j + 1], D_);
      if (hi <= lo) continue;
      const double uc = 0.5 * (st.u[j] + st.u[j + 1]);
      const double rc = 0.5 * (lo + hi);
      s += (st.rho[j] * std::abs(uc * uc * uc) +
            std::pow(st.rho[j], st.par.gamma + th)) *
           ipow(rc, st.par.n - 1) * (hi - lo);
    }
    return s;
  }

  double d_, D_;
  bool started_ = false;
  double den_ = 0.0, vel_ = 0.0, last_den_ = 0.0, last_vel_ = 0.0, last_tau_ = 0.0;
};

/// Mass near the origin, omega_n int_0^delta rho r^{n-1} dr (exact for the
/// cellwise-constant Lagrangian density; 0 for delta inside the vacuum hole).
inline double concentration_probe(const LagrangianState& st, double delta) {
  return st.par.omega_n * st.cumulative(delta);
}

inline double concentration_probe(const EulerianSlice& s, const ModelParams& par, double delta) {
  const std::vector<double> cum = cumulative_mass_integral(s.r, s.rho, par.n);
  return par.omega_n * lerp_clamped(s.r, cum, delta);
}

/// min_t b(t) / b over a recorded boundary trajectory.
inline double domain_check(const std::vector<double>& b_of_t, double b) {
  double mn = std::numeric_limits<double>::infinity();
  for (double v : b_of_t) mn = std::min(mn, v / b);
  return mn;
}

/// Per-cadence invariant ledger entry.
struct DiagnosticsReport {
  double tau = 0.0;
  double mass = 0.0;
  double E_kin = 0.0, E_int = 0.0, E_field = 0.0, E_grav_coupling = 0.0;
  double E_balance_residual = 0.0;
  double bd_functional = 0.0, bd_residual = 0.0, bd_diss_radial = 0.0;
  double rho_boundary = 0.0, rho_boundary_oracle = 0.0;
  double b_of_t = 0.0;
  double higher_int_density = 0.0, higher_int_velocity = 0.0;
  std::vector<double> concentration;
};

/// Closed-form free-boundary density decay law from the initial boundary
/// density: rho0_b (1 + (gamma-1)^2 eps^{-1} e(rho0_b) t)^{-1/(gamma-1)}.
inline double boundary_density_oracle(const ModelParams& p, double rho0_b, double t) {
  const double g = p.gamma;
  return rho0_b *
         std::pow(1.0 + (g - 1.0) * (g - 1.0) / p.eps * p.internal_energy(rho0_b) * t,
                  -1.0 / (g - 1.0));
}

/// Lagrangian-side energies (cheap, used at ledger cadence):
/// E_kin and E_int as on the Eulerian side; E_field from the exact piecewise
/// cumulative with the analytic exterior tail; E_grav_coupling per cell.
inline Energies lagrangian_energies(const LagrangianState& st) {
  const int N = st.cells();
  const ModelParams& p = st.par;
  const auto w = edge_weights(st);
  Energies out;
  for (int j = 0; j <= N; ++j) out.E_kin += 0.5 * st.u[j] * st.u[j] * w[j];
  out.E_kin *= p.omega_n;
  double eint = 0.0, efield = 0.0, ecoup = 0.0;
  for (int j = 0; j < N; ++j) {
    const double dx = st.x[j + 1] - st.x[j];
    eint += p.internal_energy(st.rho[j]) * dx;
    const double r0 = st.r[j], r1 = st.r[j + 1];
    const double x0 = st.x[j], rho = st.rho[j];
    auto G = [&](double r) { return x0 + rho * pow_diff(r0, r, p.n) / p.n; };
    efield += gauss5([&](double r) {
      const double g = G(r);
      return g * g * std::pow(r, 1 - p.n);
    }, r0, r1);
    ecoup += gauss5([&](double r) { return G(r) * rho * r; }, r0, r1);
  }
  out.E_int = p.omega_n * eint;
  const double gtot = st.x[N];
  out.E_field =
      p.omega_n * (efield + gtot * gtot * std::pow(st.r[N], 2 - p.n) / (p.n - 2));
  out.E_grav_coupling = p.omega_n / (p.n - 2) * ecoup;
  return out;
}

}  // namespace cnsp
