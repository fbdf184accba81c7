#pragma once

// Dot populations of the double dot straight from the operator solution in
// the time domain:
//   <d1^dag d1>(s) = sum_m |D_1m(s)|^2 n_m
//                  + sum_{a,m} Gamma^a_m int int du du' conj(D_1m(s-u)) D_1m(s-u') C_a(u-u'),
// C_a(tau) = int de/2pi exp(i e tau) f_a(e) = delta(tau)/2 - (i T/2) exp(i mu tau) / sinh(pi T tau).
// D is a truncated power series; the double integral is done by nested
// Gauss-Kronrod. Neither eigenvectors nor energy integrals are used.

#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oracles/taylor_expm.hpp"
#include "qtransport/model.hpp"

namespace oracle {

inline qt::ComplexMatrix dqd_drift(const qt::DqdModel& m) {
  const double gl = m.reservoirs[0].gamma, gr = m.reservoirs[1].gamma;
  const bool parallel = m.configuration == qt::DqdConfiguration::Parallel;
  const double g11 = parallel ? gl + gr : gl;
  const double g22 = parallel ? gl + gr : gr;
  const qt::cplx i1(0.0, 1.0);
  qt::ComplexMatrix a(2, 2);
  a(0, 0) = -0.5 * g11 - i1 * m.epsilon_d;
  a(1, 1) = -0.5 * g22 - i1 * m.epsilon_d;
  a(0, 1) = a(1, 0) = -i1 * m.g;
  return a;
}

inline qt::ComplexMatrix dqd_d(const qt::DqdModel& m, double s) { return taylor_expm(dqd_drift(m), s, 80); }

// Regular part of C_a(tau), tau > 0.
inline qt::cplx lead_correlation(const qt::Reservoir& r, double tau) {
  const double t = r.temperature;
  return qt::cplx(0.0, -0.5 * t) * std::exp(qt::cplx(0.0, r.mu * tau)) / std::sinh(qt::kPi * t * tau);
}

inline double dqd_population(const qt::DqdModel& m, int dot, double s) {
  using boost::math::quadrature::gauss_kronrod;
  const int n = dot - 1;
  const qt::ComplexMatrix ds = dqd_d(m, s);
  double pop = std::norm(ds(n, 0)) * m.n1 + std::norm(ds(n, 1)) * m.n2;
  const bool parallel = m.configuration == qt::DqdConfiguration::Parallel;
  for (int a = 0; a < 2; ++a) {
    const qt::Reservoir& r = m.reservoirs[static_cast<std::size_t>(a)];
    for (int k = 0; k < 2; ++k) {
      const double rate = parallel ? r.gamma : (k == a ? r.gamma : 0.0);
      if (rate == 0.0) continue;
      // a' = s - u' runs over [0, s]; tau = u - u' over [0, a'].
      auto outer = [&](double ap) {
        const qt::cplx dap = dqd_d(m, ap)(n, k);
        auto inner = [&](double tau) {
          const qt::cplx lag = dqd_d(m, ap - tau)(n, k);
          return 2.0 * std::real(std::conj(lag) * dap * lead_correlation(r, tau));
        };
        const double reg = ap > 0.0 ? gauss_kronrod<double, 31>::integrate(inner, 0.0, ap, 12, 1e-11) : 0.0;
        return 0.5 * std::norm(dap) + reg;
      };
      pop += rate * gauss_kronrod<double, 31>::integrate(outer, 0.0, s, 12, 1e-11);
    }
  }
  return pop;
}

}  // namespace oracle
