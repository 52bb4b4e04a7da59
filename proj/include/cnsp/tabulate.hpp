#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cnsp/constants.hpp"
#include "cnsp/entropy.hpp"

namespace cnsp {

struct MassTableRow {
  double gamma = 0.0;
  double B = 0.0;         // B_{n,gamma}
  double Mc = 0.0;        // critical mass (NaN if gamma out of range)
  double Cgamma = 0.0;    // energy coefficient at the given M (NaN if undefined)
};

/// Tabulate B_{n,gamma}, M_c and C_gamma over a gamma grid (kappa=+1 model).
inline std::vector<MassTableRow> critical_mass_table(int n, const std::vector<double>& gammas,
                                                     double E0, double M) {
  std::vector<MassTableRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double g : gammas) {
    MassTableRow row;
    row.gamma = g;
    ModelParams p = derive(n, g, 1, 1.0);
    try {
      row.B = B_coefficient(p);
    } catch (const Error&) {
      row.B = nan;
    }
    try {
      row.Mc = critical_mass({p, E0, M});
    } catch (const Error&) {
      row.Mc = nan;
    }
    try {
      row.Cgamma = gamma_coefficient(p, M);
    } catch (const Error&) {
      row.Cgamma = nan;
    }
    rows.push_back(row);
  }
  return rows;
}

struct EntropyTableRow {
  double rho = 0.0, u = 0.0;
  double eta = 0.0, q = 0.0, eta_rho = 0.0, eta_m = 0.0;
};

enum class PairKind { Mechanical, Sharp };

/// Tabulate a pair (and its state derivatives) over a (rho, u) grid.
inline std::vector<EntropyTableRow> entropy_table(const KernelParams& kp, PairKind kind,
                                                  const std::vector<double>& rhos,
                                                  const std::vector<double>& us) {
  std::vector<EntropyTableRow> rows;
  rows.reserve(rhos.size() * us.size());
  for (double rho : rhos)
    for (double u : us) {
      EntropyTableRow row;
      row.rho = rho;
      row.u = u;
      if (kind == PairKind::Sharp) {
        const EntropyEval e = sharp_pair(kp, rho, u);
        row.eta = e.eta;
        row.q = e.q;
        row.eta_rho = e.eta_rho;
        row.eta_m = e.eta_m;
      } else {
        const PairValue v = mechanical_pair(kp, rho, u);
        row.eta = v.eta;
        row.q = v.q;
        if (rho > 0.0) {
          row.eta_m = u;
          row.eta_rho = -0.5 * u * u + kp.a0 * kp.gamma / (kp.gamma - 1.0) *
                                           std::pow(rho, kp.gamma - 1.0);
        }
      }
      rows.push_back(row);
    }
  return rows;
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / std::max(1, count - 1));
  return g;
}

inline std::vector<double> lin_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / std::max(1, count - 1);
  return g;
}

}  // namespace cnsp
