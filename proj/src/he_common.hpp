#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"
#include "qtransport/simd.hpp"

namespace qt::detail {

// Core window for the exact-solution integrands: covers every Fermi edge by
// 40 T and the level by 4 Gamma. Tails beyond it are summed by the integrator.
inline EnergyWindow he_window(const SingleDotModel& m, const QuadratureSpec& spec) {
  const double gamma = m.gamma();
  double reach = 4.0 * gamma;
  double finest = gamma;
  EnergyWindow w;
  w.center = m.epsilon_d;
  for (const auto& r : m.reservoirs) {
    reach = std::max(reach, std::abs(r.mu - m.epsilon_d) + 40.0 * r.temperature);
    finest = std::min(finest, r.temperature);
    w.breakpoints.push_back(r.mu);
  }
  w.breakpoints.push_back(m.epsilon_d);
  w.scale = reach / spec.window_halfwidth;
  w.resolution = 0.25 * finest;
  return w;
}

// Wraps fn(e, f(e)) -> cplx into a batch integrand; f comes from the SIMD kernel.
// With `hole` set the occupation is 1 - f.
template <class Fn>
BatchIntegrand with_fermi(const Reservoir& r, bool hole, Fn fn) {
  return [r, hole, fn](std::span<const double> x, std::span<cplx> out) {
    double f[64];
    for (std::size_t off = 0; off < x.size(); off += 64) {
      const std::size_t n = std::min<std::size_t>(64, x.size() - off);
      simd::fermi_batch(x.data() + off, n, r.mu, r.temperature, f);
      for (std::size_t i = 0; i < n; ++i) out[off + i] = fn(x[off + i], hole ? 1.0 - f[i] : f[i]);
    }
  };
}

inline double sq(double v) { return v * v; }

}  // namespace qt::detail
