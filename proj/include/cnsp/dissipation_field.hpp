#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "cnsp/entropy.hpp"
#include "cnsp/errors.hpp"
#include "cnsp/fields.hpp"

namespace cnsp {

/// Discrete entropy dissipation field d_t eta + d_r q over a space-time
/// window, with a single negative-Sobolev-type proxy norm.  The field is the
/// centered-difference divergence of the pair evaluated on recorded slices;
/// the proxy applies a Hann window and weights the separable DFT by
/// 1/(1+|k|^2), a numerical stand-in for an H^-1_loc norm on the window.
struct DissipationField {
  std::vector<double> t;                      // interior times of the window
  std::vector<double> r;                      // interior radii of the window
  std::vector<std::vector<double>> residual;  // residual[ti][rk]
  double proxy_norm = 0.0;
};

template <class Psi>
inline DissipationField dissipation_field(const std::vector<EulerianSlice>& history,
                                          const KernelParams& kp, Psi&& psi, double t_lo,
                                          double t_hi, double r_lo, double r_hi) {
  if (history.size() < 3) throw invalid_argument("dissipation_field: need >= 3 slices");
  std::vector<std::size_t> ti;
  for (std::size_t i = 0; i < history.size(); ++i)
    if (history[i].t >= t_lo - 1e-12 && history[i].t <= t_hi + 1e-12) ti.push_back(i);
  if (ti.size() < 3) throw invalid_argument("dissipation_field: window outside recorded data");
  const auto& grid = history[ti[0]].r;
  std::vector<std::size_t> rk;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid[k] >= r_lo - 1e-12 && grid[k] <= r_hi + 1e-12) rk.push_back(k);
  if (rk.size() < 3) throw invalid_argument("dissipation_field: radial window too narrow");
  const double dt = history[ti[1]].t - history[ti[0]].t;
  const double dr = grid[rk[1]] - grid[rk[0]];

  // pair values on the sub-lattice
  const std::size_t nt = ti.size(), nr = rk.size();
  std::vector<std::vector<double>> eta(nt, std::vector<double>(nr));
  std::vector<std::vector<double>> q(nt, std::vector<double>(nr));
  for (std::size_t i = 0; i < nt; ++i) {
    const EulerianSlice& s = history[ti[i]];
    if (s.r.size() != grid.size())
      throw invalid_argument("dissipation_field: slices must share the lattice");
    for (std::size_t k = 0; k < nr; ++k) {
      const double rho = s.rho[rk[k]];
      const double u = rho > 0.0 ? s.u[rk[k]] : 0.0;
      const PairValue pv = eval_pair(kp, psi, rho, u);
      eta[i][k] = pv.eta;
      q[i][k] = pv.q;
    }
  }

  DissipationField out;
  out.t.resize(nt - 2);
  out.r.resize(nr - 2);
  for (std::size_t i = 1; i + 1 < nt; ++i) out.t[i - 1] = history[ti[i]].t;
  for (std::size_t k = 1; k + 1 < nr; ++k) out.r[k - 1] = grid[rk[k]];
  out.residual.assign(nt - 2, std::vector<double>(nr - 2));
  for (std::size_t i = 1; i + 1 < nt; ++i)
    for (std::size_t k = 1; k + 1 < nr; ++k)
      out.residual[i - 1][k - 1] = (eta[i + 1][k] - eta[i - 1][k]) / (2.0 * dt) +
                                   (q[i][k + 1] - q[i][k - 1]) / (2.0 * dr);

  // Hann-windowed separable DFT with 1/(1+|k|^2) weighting
  const std::size_t mt = nt - 2, mr = nr - 2;
  std::vector<std::vector<std::complex<double>>> half(mt,
                                                      std::vector<std::complex<double>>(mr));
  auto hann = [](std::size_t i, std::size_t m) {
    return m <= 1 ? 1.0 : 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (m - 1)));
  };
  for (std::size_t i = 0; i < mt; ++i)
    for (std::size_t kk = 0; kk < mr; ++kk) {
      std::complex<double> acc = 0.0;
      for (std::size_t k2 = 0; k2 < mr; ++k2) {
        const double ph = -2.0 * std::numbers::pi * double(kk) * double(k2) / double(mr);
        acc += out.residual[i][k2] * hann(k2, mr) * std::polar(1.0, ph);
      }
      half[i][kk] = acc;
    }
  double norm2 = 0.0;
  for (std::size_t w = 0; w < mt; ++w)
    for (std::size_t kk = 0; kk < mr; ++kk) {
      std::complex<double> acc = 0.0;
      for (std::size_t i2 = 0; i2 < mt; ++i2) {
        const double ph = -2.0 * std::numbers::pi * double(w) * double(i2) / double(mt);
        acc += half[i2][kk] * hann(i2, mt) * std::polar(1.0, ph);
      }
      const double kfreq = (kk <= mr / 2 ? double(kk) : double(mr) - double(kk));
      const double wfreq = (w <= mt / 2 ? double(w) : double(mt) - double(w));
      norm2 += std::norm(acc) / (1.0 + kfreq * kfreq + wfreq * wfreq);
    }
  out.proxy_norm = std::sqrt(norm2 * dr * dt / (double(mt) * double(mr)));
  return out;
}

}  // namespace cnsp
