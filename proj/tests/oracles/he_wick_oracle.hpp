#pragma once

// Current-current correlations of the single level from explicit mode
// expansions. Each operator X(s) in {d, B_L, B_R} is written as
//   X(s) = a_X(s) d0 + sum_{g,k} t_k [c0_X(e) exp(-i e s) + c1_X(e)] c_k0,
// and two-point functions are energy integrals of products of these
// coefficients. The Lambda bookkeeping of the library is not used.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace oracle {

using qt::cplx;

struct ModeOp {
  int kind;  // 0: d, 1: B_L, 2: B_R
  double s;
};

inline cplx wick_a(const qt::SingleDotModel& m, const ModeOp& op) {
  const cplx g = std::exp(-cplx(0.5 * m.gamma(), m.epsilon_d) * op.s);
  if (op.kind == 0) return g;
  const double ga = m.reservoirs[static_cast<std::size_t>(op.kind - 1)].gamma;
  return cplx(0.0, -0.5 * ga) * g;
}

// Coefficient of component k (k = 0 carries exp(-i e s), k = 1 is e-phase free)
// for reservoir g.
inline cplx wick_c(const qt::SingleDotModel& m, const ModeOp& op, int g, int k, double e) {
  const double gamma = m.gamma();
  const cplx z(0.5 * gamma, -(e - m.epsilon_d));
  const cplx decay = std::exp(-cplx(0.5 * gamma, m.epsilon_d) * op.s);
  // d: b = -i exp(-i e s) / z + i exp(-(Gamma/2 + i e_d) s) / z
  const cplx d0 = cplx(0.0, -1.0) / z;
  const cplx d1 = cplx(0.0, 1.0) * decay / z;
  if (op.kind == 0) return k == 0 ? d0 : d1;
  // B_a = phi_a - i (Gamma_a / 2) d
  const int a = op.kind - 1;
  const double ga = m.reservoirs[static_cast<std::size_t>(a)].gamma;
  const cplx base = cplx(0.0, -0.5 * ga) * (k == 0 ? d0 : d1);
  return base + ((k == 0 && g == a) ? 1.0 : 0.0);
}

inline qt::QuadratureSpec wick_spec() {
  qt::QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-11;
  spec.max_subdivisions = 40000;
  return spec;
}

inline qt::EnergyWindow wick_window(const qt::SingleDotModel& m) {
  qt::EnergyWindow w;
  w.center = m.epsilon_d;
  double scale = m.gamma();
  double finest = m.gamma();
  for (const auto& r : m.reservoirs) {
    scale = std::max(scale, std::abs(r.mu - m.epsilon_d) + 10.0 * r.temperature);
    finest = std::min(finest, r.temperature);
    w.breakpoints.push_back(r.mu);
  }
  w.scale = scale;
  w.resolution = 0.25 * finest;
  return w;
}

// hole = false: <X^dagger Y>;  hole = true: <X Y^dagger>.
inline cplx wick_pair(const qt::SingleDotModel& m, const ModeOp& x, const ModeOp& y, bool hole) {
  const double occ_d = hole ? 1.0 - m.n_d : m.n_d;
  cplx total = hole ? wick_a(m, x) * std::conj(wick_a(m, y)) * occ_d : std::conj(wick_a(m, x)) * wick_a(m, y) * occ_d;
  std::vector<qt::IntegrandTerm> terms;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      const double nu_x = k == 0 ? x.s : 0.0;
      const double nu_y = l == 0 ? y.s : 0.0;
      const double freq = std::abs(nu_x - nu_y);
      terms.push_back({[&m, x, y, k, l, nu_x, nu_y, hole](std::span<const double> e, std::span<cplx> out) {
                         for (std::size_t i = 0; i < e.size(); ++i) {
                           cplx v = 0.0;
                           for (int g = 0; g < 2; ++g) {
                             const auto& r = m.reservoirs[static_cast<std::size_t>(g)];
                             const double f = qt::fermi(r, e[i]);
                             const cplx cx = wick_c(m, x, g, k, e[i]);
                             const cplx cy = wick_c(m, y, g, l, e[i]);
                             if (hole)
                               v += r.gamma * cx * std::conj(cy) * std::exp(cplx(0.0, -e[i] * (nu_x - nu_y))) * (1.0 - f);
                             else
                               v += r.gamma * std::conj(cx) * cy * std::exp(cplx(0.0, e[i] * (nu_x - nu_y))) * f;
                           }
                           out[i] = v / qt::kTwoPi;
                         }
                       },
                       freq});
    }
  }
  total += qt::integrate_real_line(terms, wick_window(m), wick_spec()).value;
  return total;
}

// <I_a(t) I_b(t')> - <I_a(t)><I_b(t')> with I_a = i (B_a^dag d - d^dag B_a).
inline cplx wick_noise(const qt::SingleDotModel& m, int a, int b, double s, double sp) {
  const ModeOp d{0, s}, dp{0, sp}, ba{1 + a, s}, bbp{1 + b, sp};
  return -wick_pair(m, ba, dp, false) * wick_pair(m, d, bbp, true) + wick_pair(m, ba, bbp, false) * wick_pair(m, d, dp, true) +
         wick_pair(m, d, dp, false) * wick_pair(m, ba, bbp, true) - wick_pair(m, d, bbp, false) * wick_pair(m, ba, dp, true);
}

}  // namespace oracle
