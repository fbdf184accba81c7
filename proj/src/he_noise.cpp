#include <cmath>
#include <sstream>
#include <vector>

#include "he_common.hpp"
#include "qtransport/he_single.hpp"

namespace qt {

namespace {

using detail::sq;

constexpr cplx kI(0.0, 1.0);

void check_times(const SingleDotModel& m, double t, double tp, const char* op) {
  if (!(t - m.t0 >= 0.0) || !(tp - m.t0 >= 0.0)) {
    std::ostringstream os;
    os << op << ": times (" << t << ", " << tp << ") precede t0 = " << m.t0;
    throw std::invalid_argument(os.str());
  }
}

void require_coupled(const SingleDotModel& m, const char* op) {
  if (!(m.gamma() > 0.0)) throw InvalidModel("reservoirs.gamma", std::string(op) + " needs Gamma_L + Gamma_R > 0");
}

struct LeadLambda {
  cplx l1, l2;
};

LeadLambda lead_lambda(const SingleDotModel& m, Lead lead, double s, double sp, bool barred,
                       const QuadratureSpec& spec) {
  const double gamma = m.gamma();
  const double ed = m.epsilon_d;
  const double tau = s - sp;
  const Reservoir& r = m.lead(lead);
  const EnergyWindow win = detail::he_window(m, spec);
  const double inv = 1.0 / kTwoPi;
  auto z_of = [&](double e) { return cplx(0.5 * gamma, -(e - ed)); };

  LeadLambda out;
  if (sp > 0.0) {
    std::vector<IntegrandTerm> terms;
    terms.push_back({detail::with_fermi(r, barred,
                                        [=](double e, double f) {
                                          return std::exp(kI * (e * tau)) * f / z_of(e) * inv;
                                        }),
                     std::abs(tau)});
    terms.push_back({detail::with_fermi(r, barred,
                                        [=](double e, double f) {
                                          const cplx z = z_of(e);
                                          return -std::exp(kI * (e * tau) - z * sp) * f / z * inv;
                                        }),
                     s});
    out.l1 = integrate_real_line(terms, win, spec).value;
  }
  if (s > 0.0 && sp > 0.0) {
    // (Gamma/2) int exp(i e tau) (1 - exp(-conj(z) s)) (1 - exp(-z sp)) f / L
    const double h = 0.5 * gamma;
    auto piece = [=](int k) {
      return [=](double e, double f) {
        const cplx z = z_of(e);
        const double lor = h * inv / (0.25 * gamma * gamma + sq(e - ed));
        cplx ph;
        switch (k) {
          case 0: ph = std::exp(kI * (e * tau)); break;
          case 1: ph = -std::exp(kI * (e * tau) - std::conj(z) * s); break;
          case 2: ph = -std::exp(kI * (e * tau) - z * sp); break;
          default: ph = std::exp(kI * (e * tau) - std::conj(z) * s - z * sp); break;
        }
        return ph * f * lor;
      };
    };
    std::vector<IntegrandTerm> terms;
    const double freq[4] = {std::abs(tau), sp, s, 0.0};
    for (int k = 0; k < 4; ++k) terms.push_back({detail::with_fermi(r, barred, piece(k)), freq[k]});
    out.l2 = integrate_real_line(terms, win, spec).value;
  }
  return out;
}

}  // namespace

cplx he_g_minus(double x, double s, double gamma) {
  const cplx z(0.5 * gamma, -x);
  return (1.0 - std::exp(-z * s)) / (2.0 * z);
}

LambdaSet he_lambda(const SingleDotModel& m, double t, double t_prime, bool barred, const QuadratureSpec& spec) {
  m.validate();
  require_coupled(m, "he_lambda");
  check_times(m, t, t_prime, "he_lambda");
  const double s = t - m.t0, sp = t_prime - m.t0;
  if (s == sp && sp > 0.0) {
    std::ostringstream os;
    os << "he_lambda: Lambda1 diverges at equal times (t = t' = " << t << ")";
    throw NumericalError(os.str());
  }
  const double gamma = m.gamma();
  const double occ = barred ? 1.0 - m.n_d : m.n_d;
  LambdaSet out;
  out.lambda0 = 0.5 * std::exp(-0.5 * gamma * (s + sp)) * std::exp(kI * (m.epsilon_d * (s - sp))) * occ;
  for (Lead l : {Lead::L, Lead::R}) {
    const LeadLambda v = lead_lambda(m, l, s, sp, barred, spec);
    out.lambda1[static_cast<std::size_t>(index(l))] = v.l1;
    out.lambda2[static_cast<std::size_t>(index(l))] = v.l2;
  }
  return out;
}

LambdaSet he_lambda_stationary(const SingleDotModel& m, double tau, bool barred, const QuadratureSpec& spec) {
  m.validate();
  require_coupled(m, "he_lambda_stationary");
  if (tau == 0.0) throw NumericalError("he_lambda_stationary: Lambda1 diverges at tau = 0");
  const double gamma = m.gamma();
  const double ed = m.epsilon_d;
  const EnergyWindow win = detail::he_window(m, spec);
  const double inv = 1.0 / kTwoPi;
  LambdaSet out;
  for (Lead l : {Lead::L, Lead::R}) {
    const Reservoir& r = m.lead(l);
    const cplx v = integrate_real_line(detail::with_fermi(r, barred,
                                                          [=](double e, double f) {
                                                            return std::exp(kI * (e * tau)) * f /
                                                                   cplx(0.5 * gamma, -(e - ed)) * inv;
                                                          }),
                                       win, spec, std::abs(tau))
                       .value;
    const cplx w = integrate_real_line(detail::with_fermi(r, barred,
                                                          [=](double e, double f) {
                                                            return std::exp(kI * (e * tau)) * f * 0.5 * gamma /
                                                                   (0.25 * gamma * gamma + sq(e - ed)) * inv;
                                                          }),
                                       win, spec, std::abs(tau))
                       .value;
    out.lambda1[static_cast<std::size_t>(index(l))] = v;
    out.lambda2[static_cast<std::size_t>(index(l))] = w;
  }
  return out;
}

cplx he_lambda_regular(const SingleDotModel& m, Lead lead, double tau, bool barred) {
  const Reservoir& r = m.lead(lead);
  const double gamma = m.gamma();
  if (tau == 0.0) throw NumericalError("he_lambda_regular: singular at tau = 0");
  const double x = kPi * r.temperature * tau;
  const cplx v = -kI * (r.temperature / gamma) * std::exp(kI * (r.mu * tau)) / std::sinh(x);
  return barred ? -v : v;
}

TwoPointCorrelators he_correlators(const SingleDotModel& m, const LambdaSet& at, const LambdaSet& swapped, double tau,
                                   bool barred) {
  const double gamma = m.gamma();
  std::array<double, 2> g{m.lead(Lead::L).gamma, m.lead(Lead::R).gamma};
  cplx mix = 0.0;  // sum_b (Gamma_b / Gamma) Lambda2_b
  for (std::size_t b = 0; b < 2; ++b) mix += g[b] / gamma * at.lambda2[b];
  TwoPointCorrelators c;
  c.dd = 2.0 * (at.lambda0 + mix);
  for (std::size_t a = 0; a < 2; ++a) {
    c.bd[a] = kI * g[a] * (at.lambda0 - at.lambda1[a] + mix);
    for (std::size_t b = 0; b < 2; ++b) {
      cplx v = 0.5 * g[a] * g[b] * (at.lambda0 - at.lambda1[a] - std::conj(swapped.lambda1[b]) + mix);
      if (a == b && g[a] > 0.0)
        v += g[a] * 0.5 * gamma * he_lambda_regular(m, a == 0 ? Lead::L : Lead::R, tau, barred);
      c.bb[a][b] = v;
    }
  }
  return c;
}

std::array<std::array<cplx, 2>, 2> he_noise_two_time_all(const SingleDotModel& m, double t, double t_prime,
                                                          const QuadratureSpec& spec) {
  m.validate();
  check_times(m, t, t_prime, "he_noise_two_time");
  std::array<std::array<cplx, 2>, 2> out{};
  if (m.gamma() == 0.0) return out;
  if (t == t_prime) {
    std::ostringstream os;
    os << "he_noise_two_time: equal times are singular in the wide-band limit (t = t' = " << t << ")";
    throw NumericalError(os.str());
  }
  const double tau = t - t_prime;
  const LambdaSet fwd = he_lambda(m, t, t_prime, false, spec);
  const LambdaSet bwd = he_lambda(m, t_prime, t, false, spec);
  const LambdaSet fwd_bar = he_lambda(m, t, t_prime, true, spec);
  const LambdaSet bwd_bar = he_lambda(m, t_prime, t, true, spec);
  // Particle correlators <X^dagger(t) Y(t')> and hole correlators
  // <X(t') Y^dagger(t)> written as barred <Y^dagger(t) X(t')>-type objects.
  const TwoPointCorrelators p = he_correlators(m, fwd, bwd, tau, false);        // (t, t')
  const TwoPointCorrelators q = he_correlators(m, bwd, fwd, -tau, false);       // (t', t)
  const TwoPointCorrelators hq = he_correlators(m, bwd_bar, fwd_bar, -tau, true);  // barred (t', t)
  const TwoPointCorrelators hp = he_correlators(m, fwd_bar, bwd_bar, tau, true);   // barred (t, t')
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      // Wick pairing of i(B^dag d - d^dag B)(t) i(B^dag d - d^dag B)(t'):
      //   -<B_a^dag d'><d B_b'^dag> + <B_a^dag B_b'><d d'^dag>
      //   + <d^dag d'><B_a B_b'^dag> - <d^dag B_b'><B_a d'^dag>
      const cplx t1 = -p.bd[a] * hq.bd[b];
      const cplx t2 = p.bb[a][b] * hq.dd;
      const cplx t3 = p.dd * hq.bb[b][a];
      const cplx t4 = -std::conj(q.bd[b]) * std::conj(hp.bd[a]);
      out[a][b] = t1 + t2 + t3 + t4;
    }
  }
  return out;
}

cplx he_noise_two_time(const SingleDotModel& m, Lead a, Lead b, double t, double t_prime,
                       const QuadratureSpec& spec) {
  return he_noise_two_time_all(m, t, t_prime, spec)[static_cast<std::size_t>(index(a))]
                                                   [static_cast<std::size_t>(index(b))];
}

cplx he_noise_frequency_ss(const SingleDotModel& m, Lead a, Lead b, double omega, const QuadratureSpec& spec) {
  m.validate();
  require_coupled(m, "he_noise_frequency_ss");
  const double gamma = m.gamma();
  const double ed = m.epsilon_d;
  const Reservoir ra = m.lead(a);
  const Reservoir rb = m.lead(b);
  const double ga = ra.gamma, gb = rb.gamma;
  const double wl = m.lead(Lead::L).gamma / gamma, wr = m.lead(Lead::R).gamma / gamma;
  const Reservoir rl = m.lead(Lead::L), rr = m.lead(Lead::R);
  const bool same = a == b;

  struct Kernel {
    cplx a;      // 1 / (Gamma/2 - i x)
    double b;    // (Gamma/2) / L
    double fa, fb, F;
  };
  auto kernel = [=](double e) {
    Kernel k;
    const double x = e - ed;
    k.a = 1.0 / cplx(0.5 * gamma, -x);
    k.b = 0.5 * gamma / (0.25 * gamma * gamma + x * x);
    k.fa = fermi(ra, e);
    k.fb = fermi(rb, e);
    k.F = wl * fermi(rl, e) + wr * fermi(rr, e);
    return k;
  };
  BatchIntegrand f = [=](std::span<const double> x, std::span<cplx> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Kernel k = kernel(x[i]);
      const Kernel kw = kernel(x[i] - omega);
      // particle-like amplitudes at e, hole-like at e - omega
      const cplx ua = -k.a * k.fa + k.b * k.F;
      const cplx ub_star = std::conj(-k.a * k.fb + k.b * k.F);
      const cplx hb = -kw.a * (1.0 - kw.fb) + kw.b * (1.0 - kw.F);
      const cplx ha_star = std::conj(-kw.a * (1.0 - kw.fa) + kw.b * (1.0 - kw.F));
      const cplx c = (same ? ga * k.fa : 0.0) + 0.5 * ga * gb * (-k.a * k.fa - std::conj(k.a) * k.fb + k.b * k.F);
      const cplx cbar = (same ? ga * (1.0 - kw.fa) : 0.0) +
                        0.5 * ga * gb * (-kw.a * (1.0 - kw.fb) - std::conj(kw.a) * (1.0 - kw.fa) + kw.b * (1.0 - kw.F));
      cplx v = ga * gb * (ua * hb + ub_star * ha_star);
      v += c * 2.0 * kw.b * (1.0 - kw.F);
      v += 2.0 * k.b * k.F * cbar;
      out[i] = v / kTwoPi;
    }
  };
  EnergyWindow win = detail::he_window(m, spec);
  const double shift = std::abs(omega);
  win.scale = (win.scale * spec.window_halfwidth + shift) / spec.window_halfwidth;
  win.center = ed + 0.5 * omega;
  for (std::size_t i = 0, n = win.breakpoints.size(); i < n; ++i) win.breakpoints.push_back(win.breakpoints[i] + omega);
  return integrate_real_line(f, win, spec).value;
}

cplx he_noise_frequency_symmetrized(const SingleDotModel& m, Lead a, Lead b, double omega, const QuadratureSpec& spec) {
  return 0.5 * (he_noise_frequency_ss(m, a, b, omega, spec) + he_noise_frequency_ss(m, b, a, -omega, spec));
}

double he_contact_energy_current(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec) {
  m.validate();
  const double s = t - m.t0;
  if (!(s > 0.0)) {
    std::ostringstream os;
    os << "he_contact_energy_current: requires t > t0 (t = " << t << ", t0 = " << m.t0 << ")";
    throw std::invalid_argument(os.str());
  }
  const double gamma = m.gamma();
  const double ga = m.lead(lead).gamma;
  if (gamma == 0.0 || ga == 0.0) return 0.0;
  const Reservoir r = m.lead(lead);
  const double ed = m.epsilon_d;
  QuadratureSpec tight = spec;
  tight.abs_tol = spec.abs_tol * 1e-3;
  tight.rel_tol = std::max(spec.rel_tol * 1e-3, 1e-14);
  const EnergyWindow win = detail::he_window(m, tight);
  // Im of the time-dependent part of Lambda1_a(t, t):
  // -exp(-Gamma s/2) int ((Gamma/2) sin(x s) + x cos(x s)) f / L
  auto im_lambda1 = [&](double u) {
    const double v =
        integrate_real_line(detail::with_fermi(r, false,
                                               [=](double e, double f) {
                                                 const double x = e - ed;
                                                 return cplx((0.5 * gamma * std::sin(x * u) + x * std::cos(x * u)) * f /
                                                             (0.25 * gamma * gamma + x * x) / kTwoPi);
                                               }),
                            win, tight, u)
            .value.real();
    return -std::exp(-0.5 * gamma * u) * v;
  };
  const double h = std::min(1e-4 / gamma, 0.5 * s);
  auto diff = [&](double step) { return (im_lambda1(s + step) - im_lambda1(s - step)) / (2.0 * step); };
  const double d1 = diff(h);
  const double d2 = diff(0.5 * h);
  double d = d2;
  if (std::abs(d1 - d2) > 1e-6 * std::max(std::abs(d2), 1e-300)) d = (4.0 * d2 - d1) / 3.0;
  return -2.0 * ga * d;
}

}  // namespace qt
