#pragma once

// Direct expectation values of the single-level operator solution in the
// wide-band limit. Nothing here uses the A/B/C/D bookkeeping of the library:
// observables are assembled from dot mode functions b(e, s) with
// d(s) = G(s) d0 + sum_k t_k b(e_k, s) c_k0, G(s) = exp(-(i e_d + Gamma/2) s).

#include <cmath>
#include <complex>
#include <vector>

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace oracle {

using qt::cplx;

// Duhamel integral -i int_0^s G(s - u) exp(-i e u) du by adaptive quadrature.
inline cplx mode_numeric(const qt::SingleDotModel& m, double e, double s) {
  const double gamma = m.gamma();
  const cplx k(0.5 * gamma, m.epsilon_d);
  qt::QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 20000;
  qt::BatchIntegrand f = [&](std::span<const double> u, std::span<cplx> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::exp(-k * (s - u[i])) * std::exp(cplx(0.0, -e * u[i]));
  };
  const double period = std::abs(e) > 0 ? qt::kTwoPi / std::abs(e) : 0.0;
  return cplx(0.0, -1.0) * qt::integrate_interval(f, 0.0, s, spec, {}, period < s ? period : 0.0).value;
}

// The same integral done by hand: -i exp(-i e s) (1 - exp(-z s)) / z, z = Gamma/2 - i x.
inline cplx mode_closed(const qt::SingleDotModel& m, double e, double s) {
  const double gamma = m.gamma();
  const cplx z(0.5 * gamma, -(e - m.epsilon_d));
  return cplx(0.0, -1.0) * std::exp(cplx(0.0, -e * s)) * (1.0 - std::exp(-z * s)) / z;
}

inline qt::EnergyWindow window(const qt::SingleDotModel& m) {
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

inline qt::QuadratureSpec tight() {
  qt::QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-11;
  spec.max_subdivisions = 20000;
  return spec;
}

// q(e) = conj(b(e, s)) exp(-i e s) = i (1 - exp(-conj(z) s)) / conj(z), split
// into its non-oscillating part q0 = i / conj(z) and q1 = q - q0, which
// oscillates as exp(-i x s). The integrator sums the two tails differently.
inline cplx q_part(const qt::SingleDotModel& m, double e, double s, int part) {
  const cplx zb(0.5 * m.gamma(), e - m.epsilon_d);
  if (part == 0) return cplx(0.0, 1.0) / zb;
  return cplx(0.0, -1.0) * std::exp(-zb * s) / zb;
}

template <class Piece>
double integrate_pieces(const qt::SingleDotModel& m, double s, Piece piece, int npieces) {
  std::vector<qt::IntegrandTerm> terms;
  for (int p = 0; p < npieces; ++p) {
    terms.push_back({[&, p](std::span<const double> e, std::span<cplx> out) {
                       for (std::size_t i = 0; i < e.size(); ++i) out[i] = piece(e[i], p) / qt::kTwoPi;
                     },
                     p == 0 ? 0.0 : s});
  }
  return qt::integrate_real_line(terms, window(m), tight()).value.real();
}

inline double lead_weight(const qt::SingleDotModel& m, double e) {
  double occ = 0.0;
  for (const auto& r : m.reservoirs) occ += r.gamma * qt::fermi(r, e);
  return occ;
}

inline double occupation(const qt::SingleDotModel& m, double s) {
  // |q|^2 = |q0|^2 + |q1|^2 (no oscillation) + 2 Re q0 conj(q1)
  auto piece = [&](double e, int p) -> cplx {
    const cplx q0 = q_part(m, e, s, 0), q1 = q_part(m, e, s, 1);
    const double v = p == 0 ? std::norm(q0) + std::norm(q1) : 2.0 * std::real(q0 * std::conj(q1));
    return v * lead_weight(m, e);
  };
  return std::exp(-m.gamma() * s) * m.n_d + integrate_pieces(m, s, piece, s > 0 ? 2 : 1);
}

// I_a = -d<N_a>/dt = 2 Im <d^dagger phi_a> - Gamma_a n, phi_a the free lead field.
inline double particle_current(const qt::SingleDotModel& m, qt::Lead a, double s) {
  const qt::Reservoir& r = m.lead(a);
  auto piece = [&](double e, int p) -> cplx { return 2.0 * r.gamma * q_part(m, e, s, p).imag() * qt::fermi(r, e); };
  return integrate_pieces(m, s, piece, 2) - r.gamma * occupation(m, s);
}

// J_a = -d<H_a>/dt. The lead sum sum_k t_k e_k c_k(t) reduces to
// phi^e_a + (Gamma_a/2) d'(t) plus a real multiple of d(t) that drops out of
// the imaginary part, so
//   J_a = 2 Im <d^dagger phi^e_a> - Gamma_a e_d n + Gamma_a Im <d^dagger xi>,
// with xi the total free lead field. The two integrals are combined pointwise
// because each alone diverges logarithmically.
inline double energy_current(const qt::SingleDotModel& m, qt::Lead a, double s) {
  const qt::Reservoir& r = m.lead(a);
  auto piece = [&](double e, int p) -> cplx {
    const cplx q = q_part(m, e, s, p);
    return r.gamma * (2.0 * e * q.imag() * qt::fermi(r, e) - q.real() * lead_weight(m, e));
  };
  return integrate_pieces(m, s, piece, 2) - r.gamma * m.epsilon_d * occupation(m, s);
}

}  // namespace oracle
