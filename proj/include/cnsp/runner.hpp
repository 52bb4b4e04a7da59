#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cnsp/fields.hpp"
#include "cnsp/monitor.hpp"
#include "cnsp/solver.hpp"

namespace cnsp {

struct SimOptions {
  double T = 1.0;
  double dump_cadence = 0.05;
  int monitor_stride = 4;  // accumulator sampling interval, in steps
  std::vector<double> dump_times;  // extra exact dump instants
  double cfl = 0.4;
  long max_steps = -1;
  bool keep_slices = false;            // record Eulerian slices at dumps
  std::vector<double> slice_times;     // restrict slices to these instants (empty: all dumps)
  std::vector<double> slice_grid;      // lattice for slices (empty: uniform 1025 on [0, b0])
  std::vector<double> delta_ladder;    // empty: {0.01, 0.02, 0.05, 0.1} * b0
  double window_lo_frac = 0.1;         // higher-integrability window [d, D] = fracs * b0
  double window_hi_frac = 0.9;
};

struct RunResult {
  std::vector<DiagnosticsReport> ledger;
  std::vector<EulerianSlice> slices;
  LagrangianState state;  // final (or last good, on blow-up)
  long steps = 0;
  bool blew_up = false;
  double halt_tau = 0.0;
  double E0 = 0.0;       // initial energy functional scale (kinetic + internal)
  double bd0 = 0.0;      // initial BD functional
  double rho0_boundary = 0.0;
};

/// Run a simulation with the full diagnostics ledger attached.
inline RunResult simulate(LagrangianState st, const SimOptions& opt) {
  RunResult res;
  const double b0 = st.outer_radius();

  std::vector<double> deltas = opt.delta_ladder;
  if (deltas.empty()) deltas = {0.01 * b0, 0.02 * b0, 0.05 * b0, 0.1 * b0};
  std::vector<double> grid = opt.slice_grid;
  if (opt.keep_slices && grid.empty()) grid = uniform_grid(0.0, b0, 1025);

  EnergyBalanceAccumulator ebal;
  BdBalanceAccumulator bdbal;
  HigherIntegrabilityAccumulator hint(opt.window_lo_frac * b0, opt.window_hi_frac * b0);
  ebal.start(st);
  bdbal.start(st);
  hint.start(st);

  const Energies e0 = lagrangian_energies(st);
  res.E0 = e0.E_kin + e0.E_int;
  res.bd0 = bd_quantity(st);
  res.rho0_boundary = st.boundary_density();
  const double rho0_b = res.rho0_boundary;

  long steps_taken = 0;
  const long stride = std::max(1, opt.monitor_stride);
  RunHooks hooks;
  hooks.on_step = [&](const LagrangianState& next, double /*dt*/) {
    ++steps_taken;
    if (steps_taken % stride == 0) {
      ebal.sample(next);
      bdbal.sample(next);
      hint.sample(next);
    }
  };
  hooks.on_dump = nullptr;  // set below
  hooks.on_dump = [&](const LagrangianState& s) {
    ebal.sample(s);
    bdbal.sample(s);
    hint.sample(s);
    DiagnosticsReport rep;
    rep.tau = s.tau;
    rep.mass = s.total_mass();
    const Energies e = lagrangian_energies(s);
    rep.E_kin = e.E_kin;
    rep.E_int = e.E_int;
    rep.E_field = e.E_field;
    rep.E_grav_coupling = e.E_grav_coupling;
    rep.E_balance_residual = ebal.residual();
    rep.bd_functional = bd_quantity(s);
    rep.bd_residual = bdbal.residual();
    rep.bd_diss_radial = bd_dissipation_radial(s);
    rep.rho_boundary = s.boundary_density();
    rep.rho_boundary_oracle = boundary_density_oracle(s.par, rho0_b, s.tau);
    rep.b_of_t = s.outer_radius();
    rep.higher_int_density = hint.density_value();
    rep.higher_int_velocity = hint.velocity_value();
    rep.concentration.reserve(deltas.size());
    for (double d : deltas) rep.concentration.push_back(concentration_probe(s, d));
    res.ledger.push_back(std::move(rep));
    if (opt.keep_slices) {
      bool want = opt.slice_times.empty();
      for (double t : opt.slice_times)
        if (std::abs(s.tau - t) <= 1e-10) want = true;
      if (want) res.slices.push_back(resample(s, grid));
    }
  };

  RunOptions ro;
  ro.dump_cadence = opt.dump_cadence;
  ro.dump_times = opt.dump_times;
  ro.max_steps = opt.max_steps;
  ro.cfl = opt.cfl;
  try {
    run(st, opt.T, hooks, ro);
    res.blew_up = false;
    res.halt_tau = st.tau;
  } catch (const BlowupError& e) {
    res.blew_up = true;
    res.halt_tau = e.tau();
  }
  res.steps = steps_taken;
  res.state = std::move(st);
  return res;
}

}  // namespace cnsp
