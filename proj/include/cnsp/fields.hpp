#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cnsp/constants.hpp"
#include "cnsp/interp.hpp"
#include "cnsp/quadrature.hpp"
#include "cnsp/solver.hpp"

namespace cnsp {

/// Eulerian resampling of a Lagrangian state on a fixed radial grid, with the
/// zero extension outside [a, b(t)].  phi_r is built from the state's exact
/// piecewise cumulative mass, so |r^{n-1} phi_r| <= M/omega_n holds to
/// roundoff with equality outside the support.
struct EulerianSlice {
  double t = 0.0;
  double a = 0.0;       // inner domain radius
  double b = 0.0;       // outer free boundary b(t)
  double total = 0.0;   // cumulative mass M/omega_n
  std::vector<double> r;
  std::vector<double> rho, u, m, phi_r;
};

inline EulerianSlice resample(const LagrangianState& st, const std::vector<double>& r_grid) {
  const int N = st.cells();
  EulerianSlice s;
  s.t = st.tau;
  s.a = st.inner_radius();
  s.b = st.outer_radius();
  s.total = st.x.back();
  s.r = r_grid;
  const std::size_t m = r_grid.size();
  s.rho.assign(m, 0.0);
  s.u.assign(m, 0.0);
  s.m.assign(m, 0.0);
  s.phi_r.assign(m, 0.0);

  // monotone interpolant of cell densities over cell midpoints, pinned at the
  // domain ends with the boundary cell values
  std::vector<double> rc(N + 2), dc(N + 2);
  rc[0] = s.a;
  dc[0] = st.rho.front();
  for (int j = 0; j < N; ++j) {
    rc[j + 1] = 0.5 * (st.r[j] + st.r[j + 1]);
    dc[j + 1] = st.rho[j];
  }
  rc[N + 1] = s.b;
  dc[N + 1] = st.rho.back();
  MonotoneCubic rho_i(rc, dc);
  MonotoneCubic u_i(st.r, st.u);

  for (std::size_t k = 0; k < m; ++k) {
    const double r = r_grid[k];
    if (r < s.a || r > s.b) {
      if (r > s.b && r > 0.0)
        s.phi_r[k] = st.par.kappa * s.total / ipow(r, st.par.n - 1);
      continue;  // zero extension for (rho, u, m)
    }
    s.rho[k] = std::max(0.0, rho_i(r));
    s.u[k] = u_i(r);
    s.m[k] = s.rho[k] * s.u[k];
    s.phi_r[k] = st.par.kappa * st.cumulative(r) / ipow(r, st.par.n - 1);
  }
  return s;
}

inline std::vector<double> uniform_grid(double lo, double hi, int npts) {
  std::vector<double> g(npts);
  for (int i = 0; i < npts; ++i) g[i] = lo + (hi - lo) * i / (npts - 1);
  return g;
}

/// Potential gradient recomputed from the slice's own density samples
/// (piecewise-linear cumulative): 0 for r <= a, kappa r^{1-n} cum(r) inside,
/// and the exact exterior tail kappa (cum total) r^{1-n} beyond b.
inline std::vector<double> potential_gradient(const EulerianSlice& s, const ModelParams& par) {
  const std::vector<double> cum = cumulative_mass_integral(s.r, s.rho, par.n);
  std::vector<double> phi(s.r.size(), 0.0);
  for (std::size_t k = 0; k < s.r.size(); ++k) {
    if (s.r[k] <= s.a || s.r[k] <= 0.0) continue;
    phi[k] = par.kappa * cum[k] / ipow(s.r[k], par.n - 1);
  }
  return phi;
}

struct Energies {
  double E_kin = 0.0;
  double E_int = 0.0;
  double E_field = 0.0;          // omega_n int_0^inf |phi_r|^2 r^{n-1} dr
  double E_grav_coupling = 0.0;  // omega_n/(n-2) int (int_a^r rho z^{n-1} dz) rho r dr
};

/// Total energies of a slice.  E_field and E_grav_coupling are evaluated from
/// one common piecewise-linear density model (cumulative exact per interval,
/// Gauss panels for the outer integrals), so the field identity
/// E_field = 2 kappa^2 E_grav_coupling holds at quadrature precision for any
/// sample count.  The exterior field tail is analytic.
inline Energies energies(const EulerianSlice& s, const ModelParams& par) {
  const int n = par.n;
  const std::size_t m = s.r.size();
  Energies out;
  if (m < 2) return out;
  const std::vector<double> cum = cumulative_mass_integral(s.r, s.rho, n);
  double efield = 0.0, ecoup = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double r0 = s.r[i], r1 = s.r[i + 1];
    if (!(r1 > 0.0) || r1 <= s.a) continue;
    const double dr = r1 - r0;
    const double c1 = (s.rho[i + 1] - s.rho[i]) / dr;
    const double c0 = s.rho[i] - c1 * r0;
    const double g0 = cum[i];
    auto G = [&](double r) { return g0 + linear_times_power_integral(c0, c1, n, r0, r); };
    efield += gauss5([&](double r) {
      const double g = G(r);
      return g * g * std::pow(r, 1 - n);
    }, r0, r1);
    ecoup += gauss5([&](double r) { return G(r) * (c0 + c1 * r) * r; }, r0, r1);
  }
  const double g_end = cum.back();
  const double r_end = s.r.back();
  out.E_field = par.omega_n * (efield + g_end * g_end * std::pow(r_end, 2 - n) / (n - 2));
  out.E_grav_coupling = par.omega_n / (n - 2) * ecoup;

  const double h = s.r[1] - s.r[0];
  std::vector<double> kin(m), eint(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double rn1 = ipow(s.r[i], n - 1);
    kin[i] = 0.5 * s.rho[i] * s.u[i] * s.u[i] * rn1;
    eint[i] = (s.rho[i] > 0.0 ? s.rho[i] * par.internal_energy(s.rho[i]) : 0.0) * rn1;
  }
  out.E_kin = par.omega_n * simpson_uniform(kin, h);
  out.E_int = par.omega_n * simpson_uniform(eint, h);
  return out;
}

/// omega_n * int of the slice's piecewise-linear density over the grid.
inline double slice_mass(const EulerianSlice& s, const ModelParams& par) {
  return par.omega_n * cumulative_mass_integral(s.r, s.rho, par.n).back();
}

}  // namespace cnsp
