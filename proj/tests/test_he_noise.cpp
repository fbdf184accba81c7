#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/he_wick_oracle.hpp"
#include "qtransport/he_single.hpp"
#include "qtransport/lb.hpp"

using namespace qt;

namespace {

SingleDotModel make_model(double gl, double gr, double ed, double mul, double mur, double tl, double tr, double nd) {
  SingleDotModel m;
  m.epsilon_d = ed;
  m.n_d = nd;
  m.reservoirs[0] = Reservoir{Lead::L, tl, mul, gl};
  m.reservoirs[1] = Reservoir{Lead::R, tr, mur, gr};
  return m;
}

std::vector<SingleDotModel> random_models(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SingleDotModel> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(make_model(0.3 + 1.2 * u(rng), 0.3 + 1.2 * u(rng), -1.0 + 2.0 * u(rng), -1.2 + 2.4 * u(rng),
                             -1.2 + 2.4 * u(rng), 0.2 + 0.8 * u(rng), 0.2 + 0.8 * u(rng), u(rng)));
  }
  return out;
}

QuadratureSpec fine() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-11;
  spec.max_subdivisions = 20000;
  return spec;
}

// Stationary S(tau) from the stationary Lambda limits (Lambda0 -> 0).
cplx stationary_noise(const SingleDotModel& m, Lead a, Lead b, double tau, const QuadratureSpec& spec) {
  LambdaSet fwd = he_lambda_stationary(m, tau, false, spec);
  LambdaSet bwd = he_lambda_stationary(m, -tau, false, spec);
  LambdaSet fwd_bar = he_lambda_stationary(m, tau, true, spec);
  LambdaSet bwd_bar = he_lambda_stationary(m, -tau, true, spec);
  const TwoPointCorrelators p = he_correlators(m, fwd, bwd, tau, false);
  const TwoPointCorrelators q = he_correlators(m, bwd, fwd, -tau, false);
  const TwoPointCorrelators hq = he_correlators(m, bwd_bar, fwd_bar, -tau, true);
  const TwoPointCorrelators hp = he_correlators(m, fwd_bar, bwd_bar, tau, true);
  const auto ia = static_cast<std::size_t>(index(a)), ib = static_cast<std::size_t>(index(b));
  return -p.bd[ia] * hq.bd[ib] + p.bb[ia][ib] * hq.dd + p.dd * hq.bb[ib][ia] - std::conj(q.bd[ib]) * std::conj(hp.bd[ia]);
}

}  // namespace

TEST_CASE("Lambda0 at equal times and g_minus") {
  const SingleDotModel m = make_model(0.6, 0.9, 0.2, 0.5, -0.3, 0.4, 0.5, 0.35);
  const double s = 1.3;
  const LambdaSet l = he_lambda(m, s, 0.0, false, fine());
  CHECK(std::abs(l.lambda1[0]) == 0.0);  // s' = 0
  // Lambda0 on a symmetric pair around s: (1/2) exp(-Gamma s) exp(2 i e_d delta) n_d.
  const double gamma = m.gamma();
  const double delta = 0.05;
  const LambdaSet near = he_lambda(m, s + delta, s - delta, false, fine());
  CHECK(std::abs(near.lambda0 - 0.5 * std::exp(-gamma * s) * std::exp(cplx(0.0, 2.0 * m.epsilon_d * delta)) * m.n_d) <
        1e-15);
  CHECK(std::abs(he_g_minus(0.7, 0.0, gamma)) == 0.0);
  CHECK(std::abs(he_g_minus(0.7, 200.0, gamma) - 0.5 / cplx(0.5 * gamma, -0.7)) < 1e-14);
}

TEST_CASE("barred Lambda functions use 1 - f") {
  const SingleDotModel m = make_model(0.6, 0.9, 0.2, 0.5, -0.3, 0.4, 0.5, 0.35);
  const double gamma = m.gamma();
  const double s = 1.4, sp = 0.6, tau = s - sp;
  const LambdaSet bar = he_lambda(m, s, sp, true, fine());
  const Reservoir& r = m.lead(Lead::R);
  // Lambda2 by direct quadrature of its definition with the hole occupation,
  // expanded into the four products of (1 - exp(-conj(z) s)) (1 - exp(-z s')).
  EnergyWindow w;
  w.center = m.epsilon_d;
  w.scale = 2.0;
  w.breakpoints = {0.5, -0.3};
  std::vector<IntegrandTerm> terms;
  const double freqs[4] = {std::abs(tau), sp, s, 0.0};
  for (int k = 0; k < 4; ++k) {
    terms.push_back({[&, k](std::span<const double> e, std::span<cplx> out) {
                       for (std::size_t i = 0; i < e.size(); ++i) {
                         const double x = e[i] - m.epsilon_d;
                         const cplx z(0.5 * gamma, -x);
                         const cplx ls = std::exp(-std::conj(z) * s), lsp = std::exp(-z * sp);
                         const cplx prod = k == 0 ? cplx(1.0) : k == 1 ? -ls : k == 2 ? -lsp : ls * lsp;
                         out[i] = 0.5 * gamma * std::exp(cplx(0.0, e[i] * tau)) * prod * (1.0 - fermi(r, e[i])) /
                                  (0.25 * gamma * gamma + x * x) / kTwoPi;
                       }
                     },
                     freqs[k]});
  }
  const cplx direct = integrate_real_line(terms, w, fine()).value;
  CHECK(std::abs(bar.lambda2[1] - direct) < 1e-8);
  CHECK(std::abs(bar.lambda0 - 0.5 * std::exp(-0.5 * gamma * (s + sp)) * std::exp(cplx(0, m.epsilon_d * tau)) *
                                   (1.0 - m.n_d)) < 1e-15);
}

TEST_CASE("regular part of Lambda_g") {
  const SingleDotModel m = make_model(0.6, 0.9, 0.2, 0.5, -0.3, 0.4, 0.5, 0.35);
  const double gamma = m.gamma();
  const Reservoir& r = m.lead(Lead::L);
  for (double tau : {-2.0, 0.7, 3.0}) {
    // int exp(i e tau) f = int exp(i e tau) (f - theta(mu - e)) + exp(i mu tau) / (i tau)  (Abel)
    BatchIntegrand f = [&](std::span<const double> e, std::span<cplx> out) {
      for (std::size_t i = 0; i < e.size(); ++i)
        out[i] = std::exp(cplx(0.0, e[i] * tau)) * (fermi(r, e[i]) - (e[i] < r.mu ? 1.0 : 0.0)) / kTwoPi;
    };
    EnergyWindow w;
    w.center = r.mu;
    w.scale = 1.0;
    w.breakpoints = {r.mu};
    const cplx v = integrate_real_line(f, w, fine()).value + std::exp(cplx(0.0, r.mu * tau)) / cplx(0.0, tau) / kTwoPi;
    CHECK(std::abs(2.0 / gamma * v - he_lambda_regular(m, Lead::L, tau, false)) < 1e-9);
    CHECK(std::abs(he_lambda_regular(m, Lead::L, tau, true) + he_lambda_regular(m, Lead::L, tau, false)) < 1e-15);
  }
}

TEST_CASE("Lambda functions approach their stationary limits") {
  const SingleDotModel m = make_model(0.6, 0.9, 0.2, 0.5, -0.3, 0.4, 0.5, 0.35);
  const double gamma = m.gamma();
  for (double tau : {-1.5, 0.8}) {
    for (bool bar : {false, true}) {
      const double sp = 40.0 / gamma + std::max(0.0, -tau);
      const LambdaSet l = he_lambda(m, sp + tau, sp, bar, fine());
      const LambdaSet ss = he_lambda_stationary(m, tau, bar, fine());
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(std::abs(l.lambda1[k] - ss.lambda1[k]) < 1e-8);
        CHECK(std::abs(l.lambda2[k] - ss.lambda2[k]) < 1e-8);
      }
      CHECK(std::abs(l.lambda0) < 1e-8);
    }
  }
}

TEST_CASE("two-time noise matches the mode-expansion Wick oracle") {
  int checked = 0;
  for (const auto& m : random_models(2, 3)) {
    for (auto [s, sp] : {std::pair{1.2, 0.4}, std::pair{0.3, 2.1}}) {
      const auto all = he_noise_two_time_all(m, s, sp, fine());
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const cplx ref = oracle::wick_noise(m, a, b, s, sp);
          CHECK(std::abs(all[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] - ref) < 1e-7);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 16);
}

TEST_CASE("two-time noise Hermiticity and equal-time error") {
  for (const auto& m : random_models(3, 9)) {
    const auto x = he_noise_two_time_all(m, 1.7, 0.9);
    const auto y = he_noise_two_time_all(m, 0.9, 1.7);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(x[a][b] - std::conj(y[b][a])) < 1e-8);
    CHECK_THROWS_AS(he_noise_two_time(m, Lead::L, Lead::L, 1.0, 1.0), NumericalError);
  }
}

TEST_CASE("zero-frequency noise equals Landauer-Buttiker") {
  for (const auto& m : random_models(4, 17)) {
    const cplx ll = he_noise_frequency_ss(m, Lead::L, Lead::L, 0.0);
    const cplx lr = he_noise_frequency_ss(m, Lead::L, Lead::R, 0.0);
    const cplx rl = he_noise_frequency_ss(m, Lead::R, Lead::L, 0.0);
    const cplx rr = he_noise_frequency_ss(m, Lead::R, Lead::R, 0.0);
    const double lb = lb_shot_noise(m, Lead::L, Lead::L);
    CHECK(std::abs(ll.real() - lb) < 1e-6 * std::abs(lb));
    CHECK(std::abs(ll.imag()) < 1e-10);
    CHECK(std::abs(rl - lr) < 1e-8 * std::abs(ll));
    CHECK(std::abs(rl + rr) < 1e-8 * std::abs(ll));
    CHECK(std::abs(rr - ll) < 1e-8 * std::abs(ll));
    CHECK(ll.real() >= 0.0);
  }
}

TEST_CASE("finite-frequency noise is the Fourier transform of the stationary two-time noise") {
  // S(omega) = PV int dtau exp(-i omega tau) S_ss(tau) + delta_ab Gamma_a / 2, the
  // last term being the white part carried by the delta(tau) pieces of Lambda_g.
  const SingleDotModel m = make_model(0.7, 0.5, 0.3, 0.6, -0.4, 0.5, 0.4, 0.0);
  const double gamma = m.gamma();
  QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  spec.rel_tol = 1e-10;
  QuadratureSpec outer;
  outer.abs_tol = 1e-8;
  outer.rel_tol = 1e-8;
  for (auto [a, b] : {std::pair{Lead::L, Lead::L}, std::pair{Lead::L, Lead::R}}) {
    for (double omega : {0.0, 0.9}) {
      auto integrand = [&](double tau) {
        return std::exp(cplx(0.0, -omega * tau)) * stationary_noise(m, a, b, tau, spec) +
               std::exp(cplx(0.0, omega * tau)) * stationary_noise(m, a, b, -tau, spec);
      };
      cplx ft = 0.0;
      const double cuts[] = {0.0, 0.05, 0.3, 1.0, 3.0, 8.0, 20.0, 50.0 / gamma + 20.0};
      for (std::size_t k = 0; k + 1 < std::size(cuts); ++k) ft += integrate_interval(integrand, cuts[k], cuts[k + 1], outer).value;
      const cplx white = a == b ? 0.5 * m.lead(a).gamma : 0.0;
      const cplx formula = he_noise_frequency_ss(m, a, b, omega, spec);
      CHECK(std::abs(ft + white - formula) < 1e-6);
    }
  }
}

TEST_CASE("finite-frequency noise: Hermitian in the lead indices") {
  const SingleDotModel m = make_model(0.7, 0.5, 0.3, 0.6, -0.4, 0.5, 0.4, 0.0);
  for (double omega : {-1.3, 0.4, 2.0}) {
    const cplx lr = he_noise_frequency_ss(m, Lead::L, Lead::R, omega);
    const cplx rl = he_noise_frequency_ss(m, Lead::R, Lead::L, omega);
    CHECK(std::abs(lr - std::conj(rl)) < 1e-9);
    CHECK(std::abs(he_noise_frequency_ss(m, Lead::L, Lead::L, omega).imag()) < 1e-9);
  }
}

TEST_CASE("finite-frequency noise: emission and absorption differ, symmetrized part is even") {
  const SingleDotModel m = make_model(0.7, 0.5, 0.3, 0.6, -0.4, 0.5, 0.4, 0.0);
  const double omega = 0.4;
  const cplx plus = he_noise_frequency_ss(m, Lead::L, Lead::L, omega);
  const cplx minus = he_noise_frequency_ss(m, Lead::L, Lead::L, -omega);
  CHECK(std::abs(plus - minus) > 1e-2);
  for (auto [a, b] : {std::pair{Lead::L, Lead::L}, std::pair{Lead::L, Lead::R}}) {
    const cplx x = he_noise_frequency_symmetrized(m, a, b, omega);
    const cplx y = he_noise_frequency_symmetrized(m, b, a, -omega);
    CHECK(std::abs(x - y) < 1e-12);
  }
  CHECK(std::abs(he_noise_frequency_symmetrized(m, Lead::L, Lead::R, 0.0) - he_noise_frequency_ss(m, Lead::L, Lead::R, 0.0)) <
        1e-9);
}

TEST_CASE("contact energy current") {
  // Closed form: Gamma_a T exp(-Gamma s/2) cos((mu_a - e_d) s) / sinh(pi T s).
  for (const auto& m : random_models(3, 41)) {
    for (double s : {0.3, 1.0, 4.0}) {
      for (Lead a : {Lead::L, Lead::R}) {
        const Reservoir& r = m.lead(a);
        const double ref = r.gamma * r.temperature * std::exp(-0.5 * m.gamma() * s) *
                           std::cos((r.mu - m.epsilon_d) * s) / std::sinh(kPi * r.temperature * s);
        CHECK(std::abs(he_contact_energy_current(m, a, s) - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
      }
    }
    const double late = 40.0 / m.gamma();
    CHECK(std::abs(he_contact_energy_current(m, Lead::L, late)) < 1e-6 * m.gamma() * m.gamma());
  }
  SingleDotModel off = make_model(0.0, 0.7, 0.2, 0.5, -0.3, 0.4, 0.5, 0.35);
  CHECK(he_contact_energy_current(off, Lead::L, 1.0) == 0.0);
}
