#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <functional>
#include <thread>
#include <vector>

#include "cnsp/errors.hpp"
#include "cnsp/fields.hpp"
#include "cnsp/runner.hpp"
#include "cnsp/solver.hpp"

namespace cnsp {

/// Family-of-runs plan over a decreasing viscosity ladder, with an optional
/// b(eps) schedule, resolution coupling N(eps) ~ eps^{-1/2}, and a shared
/// space-time comparison lattice.
struct SweepPlan {
  ModelParams base;                  // eps field is replaced per rung
  std::vector<double> eps_ladder;    // strictly decreasing
  double b = 8.0;                    // fixed outer radius (default mode)
  std::vector<double> b_schedule;    // optional per-rung b (other order of limits)
  int N_base = 512;                  // cells at the largest eps
  int N_cap = 4096;
  GridRule grid_rule = GridRule::EqualMass;
  double cfl = 0.4;
  double T = 1.0;
  double t_lo = 0.2, t_hi = 1.0;     // comparison window in time
  double d = 0.0, D = 0.0;           // comparison window in radius (0,0: [0.2, 0.8] b)
  int lattice_nt = 9, lattice_nr = 257;
  std::vector<double> p_rho;         // exponents for rho distances (default {1, gamma+0.9})
  std::vector<double> p_m;           // exponents for momentum distances
  std::vector<double> delta_ladder;  // concentration probe radii (default fractions of b)
  /// State builder for one rung (profile choice is the caller's).
  std::function<LagrangianState(const ModelParams&, double b, int N)> make_state;
};

struct SweepRunSummary {
  double eps = 0.0;
  double b = 0.0;
  int N = 0;
  long steps = 0;
  bool blew_up = false;
  double halt_tau = 0.0;
  double min_b_ratio = 0.0;
  double mass = 0.0;
  double final_E_balance_residual = 0.0;
  double final_bd_residual = 0.0;
};

struct SweepRecord {
  std::vector<SweepRunSummary> runs;
  std::vector<double> p_rho, p_m;
  // distance[pi][i][j], symmetric with zero diagonal; NaN if a run blew up
  std::vector<std::vector<std::vector<double>>> d_rho, d_m;
  std::vector<std::vector<double>> concentration;  // [run][delta index]
  std::vector<double> delta_ladder;
  std::vector<std::vector<double>> b_traj_t, b_traj_v;  // boundary trajectories
  std::vector<std::vector<double>> ledger_t, boundary_rho, boundary_oracle;
};

/// L^p distance of two fields over the shared lattice:
/// ( sum |fa-fb|^p dr dt )^{1/p} with trapezoidal end weights.
inline double lp_distance(const std::vector<std::vector<double>>& fa,
                          const std::vector<std::vector<double>>& fb, double p, double dt,
                          double dr) {
  if (fa.size() != fb.size() || fa.empty())
    throw invalid_argument("lp_distance: mismatched lattices");
  double s = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].size() != fb[i].size())
      throw invalid_argument("lp_distance: mismatched lattices");
    const double wt = (i == 0 || i + 1 == fa.size()) ? 0.5 : 1.0;
    for (std::size_t k = 0; k < fa[i].size(); ++k) {
      const double wr = (k == 0 || k + 1 == fa[i].size()) ? 0.5 : 1.0;
      s += wt * wr * std::pow(std::abs(fa[i][k] - fb[i][k]), p);
    }
  }
  return std::pow(s * dt * dr, 1.0 / p);
}

inline SweepRecord execute(const SweepPlan& plan, int threads = 0) {
  if (plan.eps_ladder.empty()) throw invalid_argument("sweep: empty eps ladder");
  for (std::size_t i = 1; i < plan.eps_ladder.size(); ++i)
    if (!(plan.eps_ladder[i] < plan.eps_ladder[i - 1]))
      throw invalid_argument("sweep: eps ladder must be strictly decreasing");
  if (!plan.make_state) throw invalid_argument("sweep: make_state not set");
  if (!plan.b_schedule.empty() && plan.b_schedule.size() != plan.eps_ladder.size())
    throw invalid_argument("sweep: b schedule size mismatch");

  const std::size_t R = plan.eps_ladder.size();
  const double eps0 = plan.eps_ladder.front();
  const double bmin = plan.b_schedule.empty()
                          ? plan.b
                          : *std::min_element(plan.b_schedule.begin(), plan.b_schedule.end());
  const double d = plan.d > 0.0 ? plan.d : 0.2 * bmin;
  const double D = plan.D > 0.0 ? plan.D : 0.8 * bmin;
  if (!(d < D) || !(D <= bmin)) throw invalid_argument("sweep: window [d,D] invalid");

  std::vector<double> lattice_t(plan.lattice_nt);
  for (int i = 0; i < plan.lattice_nt; ++i)
    lattice_t[i] = plan.t_lo + (plan.t_hi - plan.t_lo) * i / (plan.lattice_nt - 1);
  const std::vector<double> lattice_r = uniform_grid(d, D, plan.lattice_nr);

  std::vector<double> deltas = plan.delta_ladder;
  if (deltas.empty()) deltas = {0.01 * bmin, 0.02 * bmin, 0.05 * bmin, 0.1 * bmin};

  // run all rungs on a bounded pool; results merged by index
  std::vector<RunResult> results(R);
  std::vector<int> cells(R);
  std::vector<double> bs(R);
  {
    std::atomic<std::size_t> cursor{0};
    int nw = threads > 0 ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
    nw = std::max(1, std::min<int>(nw, static_cast<int>(R)));
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= R) return;
        ModelParams par = plan.base;
        par.eps = plan.eps_ladder[i];
        bs[i] = plan.b_schedule.empty() ? plan.b : plan.b_schedule[i];
        cells[i] = std::min(plan.N_cap,
                            static_cast<int>(std::lround(
                                plan.N_base * std::sqrt(eps0 / par.eps))));
        LagrangianState st = plan.make_state(par, bs[i], cells[i]);
        SimOptions opt;
        opt.T = plan.T;
        opt.cfl = plan.cfl;
        opt.dump_cadence = plan.T / 20.0;
        opt.dump_times = lattice_t;
        opt.keep_slices = true;
        opt.slice_times = lattice_t;
        opt.slice_grid = lattice_r;
        opt.delta_ladder = deltas;
        results[i] = simulate(std::move(st), opt);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepRecord rec;
  rec.delta_ladder = deltas;
  rec.p_rho = plan.p_rho;
  if (rec.p_rho.empty()) rec.p_rho = {1.0, plan.base.gamma + 0.9};
  const double pm_bound = 3.0 * (plan.base.gamma + 1.0) / (plan.base.gamma + 3.0);
  rec.p_m = plan.p_m;
  if (rec.p_m.empty()) rec.p_m = {1.0, pm_bound - 0.1};
  for (double p : rec.p_m)
    if (!(p < pm_bound))
      throw invalid_argument("sweep: momentum exponent must be < 3(gamma+1)/(gamma+3)");
  for (double p : rec.p_rho)
    if (!(p < plan.base.gamma + 1.0))
      throw invalid_argument("sweep: density exponent must be < gamma+1");

  for (std::size_t i = 0; i < R; ++i) {
    const RunResult& rr = results[i];
    SweepRunSummary s;
    s.eps = plan.eps_ladder[i];
    s.b = bs[i];
    s.N = cells[i];
    s.steps = rr.steps;
    s.blew_up = rr.blew_up;
    s.halt_tau = rr.halt_tau;
    s.mass = rr.ledger.empty() ? 0.0 : rr.ledger.back().mass;
    s.final_E_balance_residual = rr.ledger.empty() ? 0.0 : rr.ledger.back().E_balance_residual;
    s.final_bd_residual = rr.ledger.empty() ? 0.0 : rr.ledger.back().bd_residual;
    std::vector<double> traj_t, traj_v, led_t, brho, borc;
    for (const auto& rep : rr.ledger) {
      traj_t.push_back(rep.tau);
      traj_v.push_back(rep.b_of_t);
      led_t.push_back(rep.tau);
      brho.push_back(rep.rho_boundary);
      borc.push_back(rep.rho_boundary_oracle);
    }
    s.min_b_ratio = traj_v.empty() ? 0.0 : domain_check(traj_v, bs[i]);
    rec.runs.push_back(s);
    rec.b_traj_t.push_back(std::move(traj_t));
    rec.b_traj_v.push_back(std::move(traj_v));
    rec.ledger_t.push_back(std::move(led_t));
    rec.boundary_rho.push_back(std::move(brho));
    rec.boundary_oracle.push_back(std::move(borc));
    // concentration at the final recorded time
    std::vector<double> conc(deltas.size(), 0.0);
    if (!rr.ledger.empty()) conc = rr.ledger.back().concentration;
    rec.concentration.push_back(std::move(conc));
  }

  // pairwise distances on the shared lattice
  const double dt_lat = lattice_t.size() > 1 ? lattice_t[1] - lattice_t[0] : 1.0;
  const double dr_lat = lattice_r[1] - lattice_r[0];
  auto field_of = [&](const RunResult& rr, bool momentum) {
    std::vector<std::vector<double>> f;
    for (const auto& sl : rr.slices) f.push_back(momentum ? sl.m : sl.rho);
    return f;
  };
  auto fill = [&](bool momentum, const std::vector<double>& ps) {
    std::vector<std::vector<std::vector<double>>> out;
    for (double p : ps) {
      std::vector<std::vector<double>> mat(R, std::vector<double>(R, 0.0));
      for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = i + 1; j < R; ++j) {
          double v = std::numeric_limits<double>::quiet_NaN();
          if (!results[i].blew_up && !results[j].blew_up &&
              results[i].slices.size() == results[j].slices.size())
            v = lp_distance(field_of(results[i], momentum), field_of(results[j], momentum), p,
                            dt_lat, dr_lat);
          mat[i][j] = mat[j][i] = v;
        }
      out.push_back(std::move(mat));
    }
    return out;
  };
  rec.d_rho = fill(false, rec.p_rho);
  rec.d_m = fill(true, rec.p_m);
  return rec;
}

}  // namespace cnsp
