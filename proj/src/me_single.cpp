#include "qtransport/me_single.hpp"

#include <cmath>

namespace qt {

namespace {

double f_at_level(const SingleDotModel& m, Lead a) { return fermi(m.lead(a), m.epsilon_d); }

double elapsed(const SingleDotModel& m, double t) {
  const double s = t - m.t0;
  if (s < 0.0) throw InvalidModel("t", "times must not precede t0");
  return s;
}

// Regular correlation for the later current at lead `late` and the earlier at
// lead `early`, with occupation p1 at the earlier time and separation dt >= 0.
double regular_part(const SingleDotModel& m, Lead late, Lead early, double p1, double dt) {
  const double fe = f_at_level(m, early);
  return -m.lead(late).gamma * m.lead(early).gamma * std::exp(-m.gamma() * dt) *
         (fe * (1.0 - 2.0 * p1) + p1 * p1);
}

}  // namespace

RateMatrix me_rate_matrix(const SingleDotModel& m) {
  RateMatrix w;
  for (Lead a : {Lead::L, Lead::R}) {
    const double g = m.lead(a).gamma;
    const double f = f_at_level(m, a);
    auto& wa = w.per_lead[static_cast<std::size_t>(index(a))];
    wa[1][0] = g * f;
    wa[0][0] = -g * f;
    wa[0][1] = g * (1.0 - f);
    wa[1][1] = -g * (1.0 - f);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) w.total[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += wa[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return w;
}

double me_population_stationary(const SingleDotModel& m) {
  double p = 0.0;
  for (Lead a : {Lead::L, Lead::R}) p += m.lead(a).gamma * f_at_level(m, a);
  return p / m.gamma();
}

MePopulations me_population(const SingleDotModel& m, double t) {
  const double s = elapsed(m, t);
  const double pss = me_population_stationary(m);
  MePopulations p;
  p.p1 = pss + (m.n_d - pss) * std::exp(-m.gamma() * s);
  p.p0 = 1.0 - p.p1;
  return p;
}

double me_current_particle(const SingleDotModel& m, Lead a, double t) {
  return m.lead(a).gamma * (f_at_level(m, a) - me_population(m, t).p1);
}

double me_current_energy(const SingleDotModel& m, Lead a, double t) {
  return m.epsilon_d * me_current_particle(m, a, t);
}

double me_current_particle_stationary(const SingleDotModel& m, Lead a) {
  return m.lead(a).gamma * (f_at_level(m, a) - me_population_stationary(m));
}

double me_activity(const SingleDotModel& m, Lead a, double t) {
  const MePopulations p = me_population(m, t);
  const double f = f_at_level(m, a);
  return m.lead(a).gamma * (f * p.p0 + (1.0 - f) * p.p1);
}

double me_activity_from_rates(const SingleDotModel& m, Lead a, double t) {
  const MePopulations p = me_population(m, t);
  const auto& wa = me_rate_matrix(m).per_lead[static_cast<std::size_t>(index(a))];
  return wa[1][0] * p.p0 + wa[0][1] * p.p1;
}

MeNoise me_noise_two_time(const SingleDotModel& m, Lead a, Lead b, double t, double t_prime) {
  MeNoise out;
  if (t > t_prime) {
    out.regular = regular_part(m, a, b, me_population(m, t_prime).p1, t - t_prime);
  } else if (t < t_prime) {
    out.regular = regular_part(m, b, a, me_population(m, t).p1, t_prime - t);
  } else {
    const double p1 = me_population(m, t).p1;
    out.regular = 0.5 * (regular_part(m, a, b, p1, 0.0) + regular_part(m, b, a, p1, 0.0));
  }
  if (a == b) out.delta_weight = me_activity(m, a, t);
  return out;
}

MeNoise me_noise_stationary(const SingleDotModel& m, Lead a, Lead b, double tau) {
  const double p = me_population_stationary(m);
  MeNoise out;
  // S(t, t + tau): for tau > 0 the current at lead a is the earlier one.
  if (tau > 0.0) {
    out.regular = regular_part(m, b, a, p, tau);
  } else if (tau < 0.0) {
    out.regular = regular_part(m, a, b, p, -tau);
  } else {
    out.regular = 0.5 * (regular_part(m, a, b, p, 0.0) + regular_part(m, b, a, p, 0.0));
  }
  if (a == b) {
    const double f = f_at_level(m, a);
    out.delta_weight = m.lead(a).gamma * (f * (1.0 - p) + (1.0 - f) * p);
  }
  return out;
}

double me_noise_stationary_jump(const SingleDotModel& m, Lead a, Lead b) {
  const double fa = f_at_level(m, a), fb = f_at_level(m, b);
  double sum = 0.0;
  for (Lead c : {Lead::L, Lead::R}) {
    const double fc = f_at_level(m, c);
    sum += m.lead(a).gamma * m.lead(b).gamma * m.lead(c).gamma / m.gamma() * (fb - fa) * (1.0 - 2.0 * fc);
  }
  return sum;
}

double me_noise_zero_frequency(const SingleDotModel& m, Lead a, Lead b) {
  const double gl = m.lead(Lead::L).gamma, gr = m.lead(Lead::R).gamma, g = m.gamma();
  const double fl = f_at_level(m, Lead::L), fr = f_at_level(m, Lead::R);
  const double v = gl * gr / g * (fl * (1.0 - fr) + fr * (1.0 - fl)) -
                   2.0 * gl * gl * gr * gr / (g * g * g) * (fl - fr) * (fl - fr);
  return a == b ? v : -v;
}

}  // namespace qt
