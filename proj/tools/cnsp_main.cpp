// Command-line driver: init / run / sweep / entropy / mc / verify.
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cnsp/config.hpp"
#include "cnsp/constants.hpp"
#include "cnsp/dissipation_field.hpp"
#include "cnsp/entropy.hpp"
#include "cnsp/fields.hpp"
#include "cnsp/initdata.hpp"
#include "cnsp/io.hpp"
#include "cnsp/monitor.hpp"
#include "cnsp/runner.hpp"
#include "cnsp/solver.hpp"
#include "cnsp/svg.hpp"
#include "cnsp/sweep.hpp"
#include "cnsp/tabulate.hpp"

using json = nlohmann::json;
using namespace cnsp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

void emit_error(const std::string& code, const std::string& message) {
  json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
}

void emit_warning(const std::string& code, const std::string& message) {
  json j;
  j["warning"]["code"] = code;
  j["warning"]["message"] = message;
  std::cerr << j.dump() << "\n";
}

ModelParams params_from(const Config& cfg) {
  return derive(static_cast<int>(cfg.get_int("model.n", 3)), cfg.get_num("model.gamma"),
                static_cast<int>(cfg.get_int("model.kappa", 1)), cfg.get_num("model.eps"));
}

RadialProfile profile_from(const Config& cfg, const ModelParams& par) {
  if (cfg.has("initial.table")) {
    const CsvTable t = read_csv(cfg.get_str("initial.table"));
    return profile_from_table(t.col("r"), t.col("rho0"), t.col("m0"));
  }
  const std::string preset = cfg.get_str("initial.preset", "uniform_ball");
  const double M = cfg.get_num("initial.M", 1.0);
  RadialProfile prof;
  if (preset == "uniform_ball") {
    prof = preset_uniform_ball(par.n, par.omega_n, cfg.get_num("initial.radius", 1.0), M);
  } else if (preset == "gaussian") {
    prof = preset_gaussian(par.n, par.omega_n, cfg.get_num("initial.sigma", 1.0), M);
  } else if (preset == "power_bump") {
    prof = preset_power_bump(par.n, par.omega_n, cfg.get_num("initial.radius", 1.0),
                             cfg.get_num("initial.power", 1.0), M);
  } else {
    throw config_error("unknown initial.preset '" + preset + "'");
  }
  const double v_in = cfg.get_num("initial.u_inward", 0.0);
  if (v_in != 0.0) {
    auto rho0 = prof.rho0;
    const double scale = prof.support > 0 ? prof.support : 1.0;
    prof.m0 = [rho0, v_in, scale](double r) { return -v_in * (r / scale) * rho0(r); };
  }
  return prof;
}

void warn_supercritical(const ModelParams& par, double M, double E0) {
  if (par.kappa != 1) return;
  const double lo = 2.0 * par.n / (par.n + 2.0);
  const double hi = 2.0 * (par.n - 1.0) / par.n;
  if (par.gamma > lo && par.gamma <= hi * (1.0 + 1e-14)) {
    const double mc = critical_mass({par, E0 > 0 ? E0 : 1.0, M});
    if (M >= mc)
      emit_warning("supercritical_mass",
                   "M = " + fmt_double(M) + " is not below the critical mass " + fmt_double(mc) +
                       "; the closed energy estimate does not apply");
  }
}

GridRule grid_rule_from(const Config& cfg) {
  const std::string g = cfg.get_str("domain.grid_rule", "equal_mass");
  if (g == "equal_mass") return GridRule::EqualMass;
  if (g == "equal_radius") return GridRule::EqualRadius;
  throw config_error("domain.grid_rule must be equal_mass or equal_radius");
}

/// Solver state straight from a raw profile sampled on [1/b, b] (no
/// smoothing pipeline; the density must stay strictly positive there).
LagrangianState state_from_profile(const RadialProfile& prof, const ModelParams& par, double b,
                                   int N, GridRule rule, int samples = 4097) {
  const double a = 1.0 / b;
  std::vector<double> rs(samples), rho(samples), us(samples);
  for (int i = 0; i < samples; ++i) {
    rs[i] = a + (b - a) * i / (samples - 1);
    rho[i] = prof.rho0(rs[i]);
    us[i] = rho[i] > 0.0 ? prof.m0(rs[i]) / rho[i] : 0.0;
    if (!(rho[i] > 0.0))
      throw config_error(
          "raw profile density vanishes inside [1/b, b]; use `init` to construct "
          "strictly positive approximate data first");
  }
  return init_state_from_samples(rs, rho, us, par, N, rule);
}

LagrangianState state_from(const Config& cfg, const ModelParams& par) {
  const double b = cfg.get_num("domain.b");
  const int N = static_cast<int>(cfg.get_int("domain.N", 512));
  const GridRule rule = grid_rule_from(cfg);
  if (cfg.has("initial.table")) {
    const CsvTable t = read_csv(cfg.get_str("initial.table"));
    if (t.has("rho") && t.has("u"))  // constructed data from `init`
      return init_state_from_samples(t.col("r"), t.col("rho"), t.col("u"), par, N, rule);
  }
  return state_from_profile(profile_from(cfg, par), par, b, N, rule,
                            static_cast<int>(cfg.get_int("initial.samples", 4097)));
}

SimOptions sim_options_from(const Config& cfg, double b) {
  SimOptions opt;
  opt.T = cfg.get_num("time.T", 1.0);
  opt.cfl = cfg.get_num("time.cfl", 0.4);
  opt.dump_cadence = cfg.get_num("time.dump_cadence", opt.T / 20.0);
  opt.max_steps = cfg.get_int("time.max_steps", -1);
  opt.monitor_stride = static_cast<int>(cfg.get_int("time.monitor_stride", 4));
  const auto win = cfg.get_list("diagnostics.window", {0.1, 0.9});
  if (win.size() != 2) throw config_error("diagnostics.window needs two fractions");
  opt.window_lo_frac = win[0];
  opt.window_hi_frac = win[1];
  opt.delta_ladder = cfg.get_list("diagnostics.delta_ladder",
                                  {0.01 * b, 0.02 * b, 0.05 * b, 0.1 * b});
  opt.keep_slices = true;
  opt.slice_grid = uniform_grid(0.0, b, static_cast<int>(cfg.get_int("diagnostics.slice_n", 1025)));
  return opt;
}

json report_json(const DiagnosticsReport& rep) {
  json j;
  j["tau"] = rep.tau;
  j["mass"] = rep.mass;
  j["E_kin"] = rep.E_kin;
  j["E_int"] = rep.E_int;
  j["E_field"] = rep.E_field;
  j["E_grav_coupling"] = rep.E_grav_coupling;
  j["E_balance_residual"] = rep.E_balance_residual;
  j["bd_functional"] = rep.bd_functional;
  j["bd_residual"] = rep.bd_residual;
  j["bd_diss_radial"] = rep.bd_diss_radial;
  j["rho_boundary"] = rep.rho_boundary;
  j["rho_boundary_oracle"] = rep.rho_boundary_oracle;
  j["b_of_t"] = rep.b_of_t;
  j["higher_int_density"] = rep.higher_int_density;
  j["higher_int_velocity"] = rep.higher_int_velocity;
  j["concentration"] = rep.concentration;
  return j;
}

int cmd_init(const Config& cfg, const std::string& out_dir) {
  const ModelParams par = params_from(cfg);
  const double b = cfg.get_num("domain.b");
  const RadialProfile prof = profile_from(cfg, par);
  InitDataOptions opt;
  opt.dense_n = static_cast<int>(cfg.get_int("init.dense_n", 8193));
  const ApproxData data = build_approx_data(prof, par, b, opt);
  const CompatibilityResiduals res = verify_compatibility(data, par);
  warn_supercritical(par, data.M, data.E0);
  ensure_dir(out_dir);
  write_csv(out_dir + "/init_data.csv", {"r", "rho", "u"}, {&data.r, &data.rho, &data.u});
  json j;
  j["M"] = data.M;
  j["E0"] = data.E0;
  j["E1"] = data.E1;
  j["alpha"] = data.alpha;
  j["eps"] = data.eps;
  j["b"] = data.b;
  j["residual_stress"] = res.stress_at_b;
  j["residual_u_inner"] = res.u_inner;
  std::ofstream(out_dir + "/init_data.json") << j.dump(2) << "\n";
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_run(const Config& cfg, const std::string& out_dir, const std::string& formats) {
  const ModelParams par = params_from(cfg);
  const double b = cfg.get_num("domain.b");
  LagrangianState st = state_from(cfg, par);
  {
    const Energies e0 = lagrangian_energies(st);
    warn_supercritical(par, st.total_mass(), e0.E_kin + e0.E_int);
  }
  SimOptions opt = sim_options_from(cfg, b);
  const bool want_csv = formats.find("csv") != std::string::npos;
  const bool want_ndjson = formats.find("ndjson") != std::string::npos;
  const bool want_svg = formats.find("svg") != std::string::npos;
  ensure_dir(out_dir);

  RunResult res = simulate(std::move(st), opt);

  if (want_ndjson) {
    std::ofstream led(out_dir + "/ledger.ndjson");
    for (const auto& rep : res.ledger) led << report_json(rep).dump() << "\n";
  }
  if (want_csv) {
    for (std::size_t k = 0; k < res.slices.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof name, "/slice_%04zu.csv", k);
      const EulerianSlice& s = res.slices[k];
      write_csv(out_dir + name, {"r", "rho", "u", "phir"}, {&s.r, &s.rho, &s.u, &s.phi_r});
    }
    // Lagrangian snapshot of the final state: edge rows carry the density of
    // the cell to their left (first row repeats the first cell).
    const LagrangianState& s = res.state;
    std::vector<double> rho_rows(s.x.size());
    rho_rows[0] = s.rho.front();
    for (std::size_t j = 1; j < s.x.size(); ++j) rho_rows[j] = s.rho[j - 1];
    write_csv(out_dir + "/snapshot_final.csv", {"x", "r", "u", "rho"},
              {&s.x, &s.r, &s.u, &rho_rows});
  }

  // summary: min/max/final of each ledger field
  json summary;
  summary["steps"] = res.steps;
  summary["blew_up"] = res.blew_up;
  summary["halt_tau"] = res.halt_tau;
  summary["mass"] = res.state.total_mass();
  summary["E0"] = res.E0;
  summary["bd0"] = res.bd0;
  auto minmax = [&](const char* key, auto getter) {
    double mn = 1e300, mx = -1e300, fin = 0.0;
    for (const auto& rep : res.ledger) {
      const double v = getter(rep);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      fin = v;
    }
    summary[key] = {{"min", mn}, {"max", mx}, {"final", fin}};
  };
  minmax("mass_series", [](const DiagnosticsReport& r) { return r.mass; });
  minmax("E_kin", [](const DiagnosticsReport& r) { return r.E_kin; });
  minmax("E_int", [](const DiagnosticsReport& r) { return r.E_int; });
  minmax("E_field", [](const DiagnosticsReport& r) { return r.E_field; });
  minmax("E_grav_coupling", [](const DiagnosticsReport& r) { return r.E_grav_coupling; });
  minmax("E_balance_residual", [](const DiagnosticsReport& r) { return r.E_balance_residual; });
  minmax("bd_functional", [](const DiagnosticsReport& r) { return r.bd_functional; });
  minmax("bd_residual", [](const DiagnosticsReport& r) { return r.bd_residual; });
  minmax("rho_boundary", [](const DiagnosticsReport& r) { return r.rho_boundary; });
  minmax("b_of_t", [](const DiagnosticsReport& r) { return r.b_of_t; });
  minmax("higher_int_density", [](const DiagnosticsReport& r) { return r.higher_int_density; });
  minmax("higher_int_velocity", [](const DiagnosticsReport& r) { return r.higher_int_velocity; });
  {
    std::vector<double> bs;
    for (const auto& rep : res.ledger) bs.push_back(rep.b_of_t);
    summary["min_b_ratio"] = bs.empty() ? 0.0 : domain_check(bs, b);
  }
  std::ofstream(out_dir + "/summary.json") << summary.dump(2) << "\n";

  if (want_svg) {
    std::vector<double> ts, bs, rb, ro;
    for (const auto& rep : res.ledger) {
      ts.push_back(rep.tau);
      bs.push_back(rep.b_of_t);
      rb.push_back(rep.rho_boundary);
      ro.push_back(rep.rho_boundary_oracle);
    }
    SvgPlot p1("free boundary trajectory", "t", "b(t)");
    p1.add_series("b(t)", ts, bs);
    p1.write(out_dir + "/boundary_trajectory.svg");
    SvgPlot p2("boundary density vs closed-form decay", "t", "rho(t, b(t))");
    p2.add_series("computed", ts, rb);
    p2.add_series("closed form", ts, ro);
    p2.write(out_dir + "/boundary_density.svg");
  }
  std::cout << summary.dump() << "\n";
  return res.blew_up ? kExitBlowup : kExitOk;
}

int cmd_sweep(const Config& cfg, const std::string& out_dir, int threads,
              const std::string& formats) {
  const ModelParams base = params_from(cfg);
  SweepPlan plan;
  plan.base = base;
  plan.eps_ladder = cfg.get_list("sweep.eps_ladder", {0.1, 0.05, 0.025});
  plan.b = cfg.get_num("sweep.b", cfg.get_num("domain.b", 8.0));
  if (cfg.has("sweep.b_schedule")) plan.b_schedule = cfg.get_list("sweep.b_schedule");
  plan.N_base = static_cast<int>(cfg.get_int("sweep.N_base", cfg.get_int("domain.N", 512)));
  plan.N_cap = static_cast<int>(cfg.get_int("sweep.N_cap", 4096));
  plan.grid_rule = grid_rule_from(cfg);
  plan.cfl = cfg.get_num("time.cfl", 0.4);
  plan.T = cfg.get_num("sweep.T", cfg.get_num("time.T", 1.0));
  const auto wt = cfg.get_list("sweep.window_t", {0.2 * plan.T, plan.T});
  plan.t_lo = wt[0];
  plan.t_hi = wt[1];
  const auto wr = cfg.get_list("sweep.window_r", {0.2 * plan.b, 0.8 * plan.b});
  plan.d = wr[0];
  plan.D = wr[1];
  plan.lattice_nt = static_cast<int>(cfg.get_int("sweep.lattice_nt", 9));
  plan.lattice_nr = static_cast<int>(cfg.get_int("sweep.lattice_nr", 257));
  if (cfg.has("sweep.p_rho")) plan.p_rho = cfg.get_list("sweep.p_rho");
  if (cfg.has("sweep.p_m")) plan.p_m = cfg.get_list("sweep.p_m");
  if (cfg.has("diagnostics.delta_ladder"))
    plan.delta_ladder = cfg.get_list("diagnostics.delta_ladder");
  const RadialProfile prof = profile_from(cfg, base);
  const GridRule rule = plan.grid_rule;
  const int samples = static_cast<int>(cfg.get_int("initial.samples", 4097));
  plan.make_state = [prof, rule, samples](const ModelParams& par, double b, int N) {
    return state_from_profile(prof, par, b, N, rule, samples);
  };

  const SweepRecord rec = execute(plan, threads);
  ensure_dir(out_dir);

  // distances.csv
  {
    std::ofstream out(out_dir + "/distances.csv");
    out << "field,p,i,j,eps_i,eps_j,distance\n";
    auto rows = [&](const char* f, const std::vector<double>& ps, const auto& mats) {
      for (std::size_t pi = 0; pi < ps.size(); ++pi)
        for (std::size_t i = 0; i < rec.runs.size(); ++i)
          for (std::size_t j = i + 1; j < rec.runs.size(); ++j)
            out << f << "," << fmt_double(ps[pi]) << "," << i << "," << j << ","
                << fmt_double(rec.runs[i].eps) << "," << fmt_double(rec.runs[j].eps) << ","
                << fmt_double(mats[pi][i][j]) << "\n";
    };
    rows("rho", rec.p_rho, rec.d_rho);
    rows("m", rec.p_m, rec.d_m);
  }
  // concentration.csv
  {
    std::ofstream out(out_dir + "/concentration.csv");
    out << "eps,delta,mass_near_origin\n";
    for (std::size_t i = 0; i < rec.runs.size(); ++i)
      for (std::size_t k = 0; k < rec.delta_ladder.size(); ++k)
        out << fmt_double(rec.runs[i].eps) << "," << fmt_double(rec.delta_ladder[k]) << ","
            << fmt_double(rec.concentration[i][k]) << "\n";
  }
  // summary json
  json sj;
  sj["eps_ladder"] = plan.eps_ladder;
  sj["b"] = plan.b;
  sj["window_t"] = {plan.t_lo, plan.t_hi};
  sj["window_r"] = {plan.d, plan.D};
  sj["p_rho"] = rec.p_rho;
  sj["p_m"] = rec.p_m;
  for (const auto& r : rec.runs) {
    json rj;
    rj["eps"] = r.eps;
    rj["b"] = r.b;
    rj["N"] = r.N;
    rj["steps"] = r.steps;
    rj["blew_up"] = r.blew_up;
    rj["halt_tau"] = r.halt_tau;
    rj["min_b_ratio"] = r.min_b_ratio;
    rj["mass"] = r.mass;
    rj["final_E_balance_residual"] = r.final_E_balance_residual;
    rj["final_bd_residual"] = r.final_bd_residual;
    sj["runs"].push_back(rj);
  }
  sj["d_rho"] = rec.d_rho;
  sj["d_m"] = rec.d_m;
  sj["concentration"] = rec.concentration;
  sj["delta_ladder"] = rec.delta_ladder;
  std::ofstream(out_dir + "/sweep_summary.json") << sj.dump(2) << "\n";

  if (formats.find("svg") != std::string::npos) {
    SvgPlot p1("free boundary trajectories", "t", "b(t)");
    for (std::size_t i = 0; i < rec.runs.size(); ++i)
      p1.add_series("eps=" + fmt_double(rec.runs[i].eps), rec.b_traj_t[i], rec.b_traj_v[i]);
    p1.write(out_dir + "/b_trajectories.svg");
    SvgPlot p2("boundary density vs closed form", "t", "rho(t,b(t))");
    for (std::size_t i = 0; i < rec.runs.size(); ++i) {
      p2.add_series("eps=" + fmt_double(rec.runs[i].eps), rec.ledger_t[i], rec.boundary_rho[i]);
      p2.add_series("oracle eps=" + fmt_double(rec.runs[i].eps), rec.ledger_t[i],
                    rec.boundary_oracle[i]);
    }
    p2.write(out_dir + "/boundary_density.svg");
    if (rec.runs.size() >= 2) {
      SvgPlot p3("successive-rung distances", "eps", "d_p(rho)");
      p3.log_x(true);
      p3.log_y(true);
      for (std::size_t pi = 0; pi < rec.p_rho.size(); ++pi) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i + 1 < rec.runs.size(); ++i) {
          xs.push_back(rec.runs[i + 1].eps);
          ys.push_back(rec.d_rho[pi][i][i + 1]);
        }
        p3.add_series("p=" + fmt_double(rec.p_rho[pi]), xs, ys);
      }
      p3.write(out_dir + "/distance_vs_eps.svg");
    }
  }
  std::cout << sj["runs"].dump() << "\n";
  return kExitOk;
}

int cmd_entropy(const Config& cfg, const std::string& out_dir) {
  const double gamma = cfg.get_num("entropy.gamma", cfg.get_num("model.gamma", 2.0));
  const KernelParams kp =
      make_kernel(gamma, static_cast<int>(cfg.get_int("entropy.nodes", 64)));
  const std::string kind_s = cfg.get_str("entropy.pair", "sharp");
  PairKind kind;
  if (kind_s == "sharp")
    kind = PairKind::Sharp;
  else if (kind_s == "mechanical")
    kind = PairKind::Mechanical;
  else
    throw config_error("entropy.pair must be sharp or mechanical");
  const auto rhos = log_grid(cfg.get_num("entropy.rho_min", 1e-6),
                             cfg.get_num("entropy.rho_max", 1e3),
                             static_cast<int>(cfg.get_int("entropy.rho_count", 31)));
  const auto us = lin_grid(cfg.get_num("entropy.u_min", -10.0),
                           cfg.get_num("entropy.u_max", 10.0),
                           static_cast<int>(cfg.get_int("entropy.u_count", 21)));
  const auto rows = entropy_table(kp, kind, rhos, us);
  ensure_dir(out_dir);
  std::ofstream out(out_dir + "/entropy_table.csv");
  out << "rho,u,eta,q,eta_rho,eta_m\n";
  for (const auto& r : rows)
    out << fmt_double(r.rho) << "," << fmt_double(r.u) << "," << fmt_double(r.eta) << ","
        << fmt_double(r.q) << "," << fmt_double(r.eta_rho) << "," << fmt_double(r.eta_m)
        << "\n";
  std::cout << "{\"rows\": " << rows.size() << "}\n";
  return kExitOk;
}

int cmd_mc(const Config& cfg, const std::string& out_dir) {
  const int n = static_cast<int>(cfg.get_int("model.n", 3));
  const double E0 = cfg.get_num("mc.E0", 1.0);
  const double M = cfg.get_num("mc.M", 1.0);
  std::vector<double> gammas;
  if (cfg.has("mc.gammas")) {
    gammas = cfg.get_list("mc.gammas");
  } else {
    const double lo = 2.0 * n / (n + 2.0) + 0.01, hi = 2.0 * (n - 1.0) / n;
    gammas = lin_grid(lo, hi, 25);
  }
  const auto rows = critical_mass_table(n, gammas, E0, M);
  ensure_dir(out_dir);
  std::ofstream out(out_dir + "/critical_mass.csv");
  out << "gamma,B,Mc,Cgamma\n";
  for (const auto& r : rows)
    out << fmt_double(r.gamma) << "," << fmt_double(r.B) << "," << fmt_double(r.Mc) << ","
        << fmt_double(r.Cgamma) << "\n";
  for (const auto& r : rows)
    std::printf("gamma=%-10s B=%-18s Mc=%-18s Cgamma=%s\n", fmt_double(r.gamma).c_str(),
                fmt_double(r.B).c_str(), fmt_double(r.Mc).c_str(),
                fmt_double(r.Cgamma).c_str());
  return kExitOk;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_verify(const Config& cfg) {
  std::vector<Check> checks;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
  };
  const bool inject = cfg.get_bool("verify.inject_mass_perturbation", false);

  // kernel normalization and moment identity
  {
    double worst = 0.0, worst_m2 = 0.0;
    for (double g : {1.4, 2.0, 3.0, 4.0}) {
      const KernelParams kp = make_kernel(g);
      double m0 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < kp.full.nodes.size(); ++i) {
        m0 += kp.full.weights[i];
        m2 += kp.full.weights[i] * kp.full.nodes[i] * kp.full.nodes[i];
      }
      worst = std::max(worst, std::abs(kp.c_norm * m0 - 1.0));
      worst_m2 = std::max(worst_m2, std::abs(m2 / m0 - (g - 1.0) / (2.0 * g)));
    }
    add("entropy-kernel normalization", worst < 1e-12, "max defect " + fmt_double(worst));
    add("kernel second-moment identity", worst_m2 < 1e-12, "max defect " + fmt_double(worst_m2));
  }
  // mechanical-pair identity
  {
    double worst = 0.0;
    for (double g : {1.4, 2.0, 3.0}) {
      const KernelParams kp = make_kernel(g);
      for (double rho : {1e-6, 1.0, 1e3})
        for (double u : {-10.0, 0.0, 10.0}) {
          const auto pv = eval_pair(kp, [](double s) { return 0.5 * s * s; }, rho, u);
          const auto mv = mechanical_pair(kp, rho, u);
          worst = std::max(worst, std::abs(pv.eta - mv.eta) / std::max(1e-300, mv.eta));
        }
    }
    add("mechanical-energy pair identity", worst < 1e-10, "max rel " + fmt_double(worst));
  }
  // cancellation at u=0
  {
    const KernelParams kp = make_kernel(2.0);
    const auto cc = cancellation(kp, 3.7, 0.0);
    add("boundary cancellation I2(u=0) = 0", cc.I2 == 0.0, fmt_double(cc.I2));
  }
  // short reference run: mass, energy balance, BD, field identity, boundary law
  {
    const ModelParams par = derive(3, 2.0, 1, 0.125);
    const RadialProfile prof = preset_uniform_ball(3, par.omega_n, 2.0, par.omega_n * 2.625);
    LagrangianState st = state_from_profile(prof, par, 2.0, 128, GridRule::EqualMass, 1025);
    SimOptions opt;
    opt.T = 0.25;
    opt.dump_cadence = 0.05;
    RunResult res = simulate(std::move(st), opt);
    double mass0 = res.ledger.front().mass;
    if (inject) mass0 *= 1.0 + 1e-9;
    bool mass_ok = true;
    for (const auto& rep : res.ledger) mass_ok = mass_ok && rep.mass == mass0;
    add("mass conservation (bitwise)", mass_ok, fmt_double(res.ledger.back().mass - mass0));
    const double erel = std::abs(res.ledger.back().E_balance_residual) / res.E0;
    add("energy balance", erel < 1e-3, "relative residual " + fmt_double(erel));
    const double brel = std::abs(res.ledger.back().bd_residual) / std::abs(res.bd0);
    add("BD-entropy balance", brel < 1e-2, "relative residual " + fmt_double(brel));
    double fid = 0.0, law = 0.0, bound = 0.0;
    for (const auto& rep : res.ledger) {
      fid = std::max(fid, std::abs(rep.E_grav_coupling - 0.5 * rep.E_field) / rep.E_field);
      law = std::max(law, std::abs(rep.rho_boundary - rep.rho_boundary_oracle) /
                              rep.rho_boundary_oracle);
    }
    for (const auto& sl : res.slices)
      for (std::size_t k = 0; k < sl.r.size(); ++k)
        if (sl.r[k] > 0)
          bound = std::max(bound, std::abs(sl.phi_r[k]) * ipow(sl.r[k], par.n - 1) -
                                      sl.total);
    add("field identity", fid < 1e-8, "max rel defect " + fmt_double(fid));
    add("boundary density law", law < 1e-2, "max rel error " + fmt_double(law));
    add("field bound |r^{n-1} phi_r| <= M/omega_n", bound <= 1e-12,
        "max excess " + fmt_double(bound));
    const std::vector<double> bs = [&] {
      std::vector<double> v;
      for (const auto& rep : res.ledger) v.push_back(rep.b_of_t);
      return v;
    }();
    add("domain expansion b(t) >= b/2", domain_check(bs, 2.0) >= 0.5,
        "min ratio " + fmt_double(domain_check(bs, 2.0)));
  }

  int failed = 0;
  for (const auto& c : checks) {
    std::printf("[%s] %-45s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    if (!c.pass) ++failed;
  }
  std::printf("%d/%zu checks passed\n", static_cast<int>(checks.size()) - failed,
              checks.size());
  return failed == 0 ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spherically symmetric compressible Navier-Stokes-Poisson simulator"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out", formats = "csv,ndjson,svg";
  int threads = 0;
  app.add_option("--config", config_path, "configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--format", formats, "comma list of csv,ndjson,svg");
  auto* sc_init = app.add_subcommand("init", "construct smoothed initial data");
  auto* sc_run = app.add_subcommand("run", "run one simulation");
  auto* sc_sweep = app.add_subcommand("sweep", "run a viscosity/resolution sweep");
  auto* sc_entropy = app.add_subcommand("entropy", "tabulate entropy pairs");
  auto* sc_mc = app.add_subcommand("mc", "tabulate critical-mass constants");
  auto* sc_verify = app.add_subcommand("verify", "run the quick invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg;
    if (!config_path.empty())
      cfg = Config::from_file(config_path);
    else if (!sc_verify->parsed() && !sc_mc->parsed() && !sc_entropy->parsed())
      throw config_error("--config is required for this subcommand");
    if (sc_init->parsed()) return cmd_init(cfg, out_dir);
    if (sc_run->parsed()) return cmd_run(cfg, out_dir, formats);
    if (sc_sweep->parsed()) return cmd_sweep(cfg, out_dir, threads, formats);
    if (sc_entropy->parsed()) return cmd_entropy(cfg, out_dir);
    if (sc_mc->parsed()) return cmd_mc(cfg, out_dir);
    if (sc_verify->parsed()) return cmd_verify(cfg);
  } catch (const BlowupError& e) {
    emit_error(e.code(), e.what());
    return kExitBlowup;
  } catch (const Error& e) {
    emit_error(e.code(), e.what());
    return e.code() == "blowup" ? kExitBlowup : kExitConfig;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kExitError;
  }
  return kExitOk;
}
