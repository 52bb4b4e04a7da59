#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cnsp/constants.hpp"
#include "cnsp/errors.hpp"
#include "cnsp/initdata.hpp"
#include "cnsp/interp.hpp"
#include "cnsp/quadrature.hpp"

namespace cnsp {

inline double ipow(double v, int k) {
  double p = 1.0;
  while (k > 0) {
    if (k & 1) p *= v;
    v *= v;
    k >>= 1;
  }
  return p;
}

/// r1^n - r0^n in the factored form (r1-r0) * sum r1^k r0^{n-1-k}; avoids the
/// cancellation of differencing large powers over thin cells.
inline double pow_diff(double r0, double r1, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += ipow(r1, k) * ipow(r0, n - 1 - k);
  return (r1 - r0) * s;
}

/// Staggered Lagrangian mass-coordinate state: radii and velocities live on
/// the fixed mass edges x_0 = 0 < ... < x_N = M/omega_n, densities in cells.
/// Cell densities are derived from the edge radii (rho = dx / cell volume),
/// which makes the mass-coordinate definition hold exactly and total mass a
/// constant of the data structure.  u[0] = 0 (rigid core at r = a); u[N] is
/// slaved to the stress-free closure at every evaluation.
struct LagrangianState {
  double tau = 0.0;
  std::vector<double> x;    // N+1 mass edges
  std::vector<double> r;    // N+1 edge radii
  std::vector<double> u;    // N+1 edge velocities
  std::vector<double> rho;  // N cell densities
  ModelParams par;

  int cells() const { return static_cast<int>(rho.size()); }
  double inner_radius() const { return r.front(); }
  double outer_radius() const { return r.back(); }
  double boundary_density() const { return rho.back(); }
  double total_mass() const { return par.omega_n * x.back(); }

  /// Exact cumulative mass integral int_a^s rho z^{n-1} dz of the
  /// cellwise-constant density; monotone, 0 below a, x_N above b(t).
  double cumulative(double s) const {
    if (s <= r.front()) return 0.0;
    if (s >= r.back()) return x.back();
    const auto it = std::upper_bound(r.begin(), r.end(), s);
    const std::size_t j = static_cast<std::size_t>(it - r.begin()) - 1;
    return x[j] + rho[j] * pow_diff(r[j], s, par.n) / par.n;
  }
};

/// Refresh rho from the edge radii and the cell volumes.
inline void derive_densities(LagrangianState& st) {
  const int N = static_cast<int>(st.x.size()) - 1;
  for (int j = 0; j < N; ++j) {
    const double vol = pow_diff(st.r[j], st.r[j + 1], st.par.n) / st.par.n;
    st.rho[j] = (st.x[j + 1] - st.x[j]) / vol;
  }
}

/// Outer-edge velocity from the one-sided stress-free closure
/// p(rho_{N-1}) = eps rho_{N-1}^2 (r^{n-1}u)_x on the last cell; with this
/// closure the boundary cell density obeys the free-boundary decay law
/// d(rho)/dtau = -(a0/eps) rho^gamma exactly in the semi-discrete system.
inline double slaved_boundary_velocity(const LagrangianState& st) {
  const int N = static_cast<int>(st.x.size()) - 1;
  const double dx = st.x[N] - st.x[N - 1];
  const double rho = st.rho[N - 1];
  const double flux_in = ipow(st.r[N - 1], st.par.n - 1) * st.u[N - 1];
  return (flux_in + dx * st.par.pressure(rho) / (st.par.eps * rho * rho)) /
         ipow(st.r[N], st.par.n - 1);
}

inline void refresh_closures(LagrangianState& st) {
  derive_densities(st);
  st.u[0] = 0.0;
  st.u[st.x.size() - 1] = slaved_boundary_velocity(st);
}

/// Diagnostic stress p - eps rho^2 (r^{n-1}u)_x at mass edge j: centered in
/// the interior, one-sided at the ends; the outer edge is 0 by construction.
inline double stress(const LagrangianState& st, int j) {
  const int N = static_cast<int>(st.x.size()) - 1;
  const ModelParams& p = st.par;
  auto flux = [&](int k) { return ipow(st.r[k], p.n - 1) * st.u[k]; };
  auto cell_sigma = [&](int c) {
    const double dudx = (flux(c + 1) - flux(c)) / (st.x[c + 1] - st.x[c]);
    return p.pressure(st.rho[c]) - p.eps * st.rho[c] * st.rho[c] * dudx;
  };
  if (j <= 0) return cell_sigma(0);
  if (j >= N) return 0.0;
  const double w = 0.5 * (st.x[j + 1] - st.x[j - 1]);
  const double dudx = (flux(j + 1) - flux(j - 1)) / (2.0 * w);
  const double rho_e = 0.5 * (st.rho[j - 1] + st.rho[j]);
  return p.pressure(rho_e) - p.eps * rho_e * rho_e * dudx;
}

struct StepReport {
  double dt_used = 0.0;
  double max_wave_speed = 0.0;
  double viscous_limit = 0.0;
  double boundary_density = 0.0;
  double boundary_radius = 0.0;
};

class StepRejected : public Error {
public:
  explicit StepRejected(const std::string& what) : Error("step_rejected", what) {}
};

/// Grid construction rule for init_state.
enum class GridRule { EqualMass, EqualRadius };

/// Build a solver state from sampled (r, rho, u) data on [a, b].
inline LagrangianState init_state_from_samples(const std::vector<double>& rs,
                                               const std::vector<double>& rhos,
                                               const std::vector<double>& us,
                                               const ModelParams& par, int N,
                                               GridRule rule = GridRule::EqualMass) {
  if (N < 16) throw invalid_argument("init_state: need N >= 16 cells");
  if (rs.size() < 2 || rs.size() != rhos.size() || rs.size() != us.size())
    throw invalid_argument("init_state: bad sample arrays");
  for (double v : rhos)
    if (!(v > 0.0)) throw invalid_argument("init_state: density must be strictly positive");

  const std::vector<double> cum = cumulative_mass_integral(rs, rhos, par.n);
  const double X = cum.back();  // M / omega_n

  LagrangianState st;
  st.par = par;
  st.x.resize(N + 1);
  st.r.resize(N + 1);
  st.u.resize(N + 1);
  st.rho.resize(N);

  if (rule == GridRule::EqualRadius) {
    for (int j = 0; j <= N; ++j) {
      const double rj = rs.front() + (rs.back() - rs.front()) * j / N;
      st.r[j] = rj;
      st.x[j] = lerp_clamped(rs, cum, rj);  // refined below
    }
    // exact piecewise cumulative at the chosen radii
    for (int j = 1; j < N; ++j) {
      const auto it = std::upper_bound(rs.begin(), rs.end(), st.r[j]);
      const std::size_t i = static_cast<std::size_t>(it - rs.begin()) - 1;
      const double dr = rs[i + 1] - rs[i];
      const double c1 = (rhos[i + 1] - rhos[i]) / dr;
      const double c0 = rhos[i] - c1 * rs[i];
      st.x[j] = cum[i] + linear_times_power_integral(c0, c1, par.n, rs[i], st.r[j]);
    }
    st.x[0] = 0.0;
    st.x[N] = X;
  } else {
    for (int j = 0; j <= N; ++j) st.x[j] = X * j / N;
    st.r[0] = rs.front();
    st.r[N] = rs.back();
    for (int j = 1; j < N; ++j) {
      // invert the piecewise cumulative by bisection on the sample intervals
      const double target = st.x[j];
      std::size_t i =
          static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) -
                                   cum.begin()) - 1;
      i = std::min(i, rs.size() - 2);
      const double dr = rs[i + 1] - rs[i];
      const double c1 = (rhos[i + 1] - rhos[i]) / dr;
      const double c0 = rhos[i] - c1 * rs[i];
      double lo = rs[i], hi = rs[i + 1];
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = cum[i] + linear_times_power_integral(c0, c1, par.n, rs[i], mid);
        (v < target ? lo : hi) = mid;
      }
      st.r[j] = 0.5 * (lo + hi);
    }
  }

  MonotoneCubic uinterp(rs, us);
  for (int j = 0; j <= N; ++j) st.u[j] = uinterp(st.r[j]);
  refresh_closures(st);
  return st;
}

inline LagrangianState init_state(const ApproxData& data, int N, const ModelParams& par,
                                  GridRule rule = GridRule::EqualMass,
                                  double mass_tol = 1e-8) {
  LagrangianState st = init_state_from_samples(data.r, data.rho, data.u, par, N, rule);
  if (std::abs(st.total_mass() - data.M) > mass_tol * data.M)
    throw invalid_argument("init_state: sample mass disagrees with declared M");
  return st;
}

/// Time integrator for the free-boundary system in mass coordinates with a
/// two-stage strong-stability-preserving (Heun) scheme.
class Stepper {
public:
  explicit Stepper(double cfl = 0.4) : cfl_(cfl) {}

  double cfl_number() const { return cfl_; }

  /// dt = cfl * min over cells of { dr/(|u|+c_s), dr^2/(2 eps max(rho,1)) }.
  double cfl_dt(const LagrangianState& st) const {
    const int N = st.cells();
    double lim = std::numeric_limits<double>::infinity();
    for (int j = 0; j < N; ++j) {
      const double dr = st.r[j + 1] - st.r[j];
      const double cs = st.par.sound_speed(st.rho[j]);
      const double uu = std::max(std::abs(st.u[j]), std::abs(st.u[j + 1]));
      lim = std::min(lim, dr / (uu + cs));
      lim = std::min(lim, dr * dr / (2.0 * st.par.eps * std::max(st.rho[j], 1.0)));
    }
    return cfl_ * lim;
  }

  /// Advance by dt (Heun); throws StepRejected if positivity or the radius
  /// ordering would break (the input state is untouched in that case).  No
  /// density floor: a nonpositive density is an error, not something to clamp.
  StepReport step(LagrangianState& st, double dt, bool want_report = true) {
    const int N = st.cells();
    resize(N);
    rhs(st, dr1_, du1_);
    prepare(stage_, st, dt);
    for (int j = 0; j <= N; ++j) {
      stage_.r[j] = st.r[j] + dt * dr1_[j];
      stage_.u[j] = st.u[j] + dt * du1_[j];
    }
    check_radii(stage_);
    refresh_closures(stage_);
    rhs(stage_, dr2_, du2_);
    prepare(next_, st, dt);
    for (int j = 0; j <= N; ++j) {
      next_.r[j] = st.r[j] + 0.5 * dt * (dr1_[j] + dr2_[j]);
      next_.u[j] = st.u[j] + 0.5 * dt * (du1_[j] + du2_[j]);
    }
    check_radii(next_);
    refresh_closures(next_);

    StepReport rep;
    rep.dt_used = dt;
    rep.boundary_density = next_.boundary_density();
    rep.boundary_radius = next_.outer_radius();
    if (want_report) {
      for (int j = 0; j < N; ++j) {
        rep.max_wave_speed =
            std::max(rep.max_wave_speed,
                     std::abs(next_.u[j]) + next_.par.sound_speed(next_.rho[j]));
        const double dr = next_.r[j + 1] - next_.r[j];
        const double vl = dr * dr / (2.0 * next_.par.eps * std::max(next_.rho[j], 1.0));
        rep.viscous_limit = (j == 0) ? vl : std::min(rep.viscous_limit, vl);
      }
    }
    std::swap(st, next_);
    return rep;
  }

  /// Semi-discrete right-hand side; assumes rho and the closures are fresh.
  void rhs(const LagrangianState& st, std::vector<double>& dr, std::vector<double>& du) {
    const int N = st.cells();
    const ModelParams& p = st.par;
    resize(N);
    for (int j = 0; j <= N; ++j) flux_[j] = ipow(st.r[j], p.n - 1) * st.u[j];
    for (int j = 0; j < N; ++j) {
      const double dudx = (flux_[j + 1] - flux_[j]) / (st.x[j + 1] - st.x[j]);
      sigma_[j] = p.pressure(st.rho[j]) - p.eps * st.rho[j] * st.rho[j] * dudx;
    }
    sigma_[N - 1] = 0.0;  // boundary closure, exact
    dr.resize(N + 1);
    du.resize(N + 1);
    dr[0] = 0.0;
    du[0] = 0.0;
    for (int j = 1; j < N; ++j) {
      const double w = 0.5 * (st.x[j + 1] - st.x[j - 1]);
      const double rn1 = ipow(st.r[j], p.n - 1);
      const double rho_x = (st.rho[j] - st.rho[j - 1]) / w;
      du[j] = -rn1 * (sigma_[j] - sigma_[j - 1]) / w - p.kappa * st.x[j] / rn1 -
              (p.n - 1) * p.eps * ipow(st.r[j], p.n - 2) * rho_x * st.u[j];
      dr[j] = st.u[j];
    }
    dr[N] = st.u[N];
    du[N] = 0.0;  // slaved, not integrated
    dr[0] = 0.0;
  }

private:
  void resize(int N) {
    if (static_cast<int>(sigma_.size()) != N) {
      sigma_.resize(N);
      flux_.resize(N + 1);
    }
  }
  static void prepare(LagrangianState& buf, const LagrangianState& st, double dt) {
    buf.par = st.par;
    buf.tau = st.tau + dt;
    buf.x = st.x;
    buf.r.resize(st.r.size());
    buf.u.resize(st.u.size());
    buf.rho.resize(st.rho.size());
  }
  static void check_radii(const LagrangianState& st) {
    for (std::size_t j = 0; j + 1 < st.r.size(); ++j) {
      if (!(st.r[j + 1] > st.r[j]) || !std::isfinite(st.r[j + 1]))
        throw StepRejected("radius ordering broke at cell " + std::to_string(j));
    }
    for (std::size_t j = 0; j < st.u.size(); ++j)
      if (!std::isfinite(st.u[j])) throw StepRejected("non-finite velocity");
  }

  double cfl_;
  LagrangianState stage_, next_;
  std::vector<double> sigma_, flux_, dr1_, du1_, dr2_, du2_;
};

struct RunHooks {
  /// Called after every accepted step with (current state, dt used).
  std::function<void(const LagrangianState&, double)> on_step;
  /// Called at dump cadence (and at tau = 0 and tau = T).
  std::function<void(const LagrangianState&)> on_dump;
};

struct RunOptions {
  double dump_cadence = 0.0;          // 0: dumps only at 0 and T
  std::vector<double> dump_times;     // extra exact dump instants
  long max_steps = -1;                // <0: unlimited
  int max_retries = 24;
  double cfl = 0.4;
};

/// Integrate to time T, invoking hooks; deterministic for a given config.
/// On unrecoverable step rejection the last good state is kept in `st` and a
/// BlowupError is thrown (possible focusing near the origin).
inline long run(LagrangianState& st, double T, const RunHooks& hooks = {},
                const RunOptions& opt = {}) {
  Stepper stepper(opt.cfl);
  long steps = 0;
  std::vector<double> marks = opt.dump_times;
  if (opt.dump_cadence > 0.0)
    for (double t = st.tau + opt.dump_cadence; t < T - 1e-14; t += opt.dump_cadence)
      marks.push_back(t);
  marks.push_back(T);
  std::sort(marks.begin(), marks.end());
  std::size_t next_mark = 0;
  while (next_mark < marks.size() && marks[next_mark] <= st.tau + 1e-14) ++next_mark;

  if (hooks.on_dump) hooks.on_dump(st);
  const double t_end = T;
  while (st.tau < t_end - 1e-14) {
    if (opt.max_steps >= 0 && steps >= opt.max_steps) break;
    double dt = stepper.cfl_dt(st);
    dt = std::min(dt, t_end - st.tau);
    bool hit_mark = false;
    if (next_mark < marks.size() && st.tau + dt >= marks[next_mark] - 1e-14) {
      dt = marks[next_mark] - st.tau;
      hit_mark = true;
    }
    int tries = 0;
    for (;;) {
      try {
        stepper.step(st, dt, false);  // leaves st untouched on rejection
        break;
      } catch (const StepRejected& e) {
        dt *= 0.5;
        hit_mark = false;
        if (++tries > opt.max_retries)
          throw BlowupError(st.tau, std::string("step size underflow: ") + e.what());
      }
    }
    ++steps;
    if (hooks.on_step) hooks.on_step(st, dt);
    if (hit_mark) {
      ++next_mark;
      if (hooks.on_dump) hooks.on_dump(st);
    }
  }
  if ((opt.max_steps >= 0 && hooks.on_dump && st.tau < t_end - 1e-14)) hooks.on_dump(st);
  return steps;
}

}  // namespace cnsp
