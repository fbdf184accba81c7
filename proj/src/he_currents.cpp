#include <cmath>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>

#include "he_common.hpp"
#include "qtransport/he_single.hpp"

namespace qt {

namespace {

using detail::sq;

// exp(-u) Ei(u) + exp(u) E1(u), u > 0.
double ei_pair(double u) {
  if (u < 40.0) return std::exp(-u) * boost::math::expint(u) + std::exp(u) * boost::math::expint(1, u);
  // Asymptotic series; odd orders cancel between the two terms.
  double term = 1.0, sum = 1.0;
  for (int k = 2; k < 200; k += 2) {
    const double next = term * (k - 1) * k / (u * u);
    if (next > term || next < 1e-18 * sum) break;
    term = next;
    sum += term;
  }
  return 2.0 * sum / u;
}

struct LeadPieces {
  double a0 = 0, b0 = 0, c0 = 0;
  double a1 = 0, b1 = 0, c1 = 0, d = 0;
};

// Integrals over (f - theta(-x)); the step parts are added in closed form.
LeadPieces lead_pieces(const SingleDotModel& m, Lead lead, double s, bool energy, const QuadratureSpec& spec) {
  const Reservoir& r = m.lead(lead);
  const double gamma = m.gamma();
  const double ed = m.epsilon_d;
  const EnergyWindow win = detail::he_window(m, spec);
  const double inv = 1.0 / kTwoPi;
  auto occ = [ed](double e, double f) { return e < ed ? f - 1.0 : f; };

  LeadPieces p;
  const cplx ia = integrate_real_line(detail::with_fermi(r, false,
                                                         [=](double e, double f) {
                                                           const double x = e - ed;
                                                           const double w = gamma * occ(e, f) / (0.25 * gamma * gamma + x * x);
                                                           return cplx(w, w * e) * inv;
                                                         }),
                                      win, spec)
                      .value;
  p.a0 = ia.real();
  p.a1 = ia.imag();
  if (s == 0.0) {
    p.b0 = p.a0;
    p.b1 = p.a1;
    return p;
  }
  const cplx ib = integrate_real_line(detail::with_fermi(r, false,
                                                         [=](double e, double f) {
                                                           const double x = e - ed;
                                                           const double w = occ(e, f) / (0.25 * gamma * gamma + x * x);
                                                           return cplx(gamma * std::cos(x * s), 2.0 * x * std::sin(x * s)) * (w * inv);
                                                         }),
                                      win, spec, s)
                      .value;
  p.b0 = ib.real();
  p.c0 = ib.imag();
  if (!energy) return p;
  const cplx ib1 = integrate_real_line(detail::with_fermi(r, false,
                                                          [=](double e, double f) {
                                                            const double x = e - ed;
                                                            const double w = e * occ(e, f) / (0.25 * gamma * gamma + x * x);
                                                            return cplx(gamma * std::cos(x * s), 2.0 * x * std::sin(x * s)) * (w * inv);
                                                          }),
                                       win, spec, s)
                       .value;
  p.b1 = ib1.real();
  p.c1 = ib1.imag();
  p.d = integrate_real_line(detail::with_fermi(r, false,
                                               [=](double e, double f) {
                                                 const double x = e - ed;
                                                 return cplx(0.5 * gamma * gamma * std::sin(x * s) * occ(e, f) /
                                                             (0.25 * gamma * gamma + x * x) * inv);
                                               }),
                            win, spec, s)
            .value.real();
  return p;
}

std::array<AbcCoefficients, 2> full_coefficients(const LeadPieces& p, const SingleDotModel& m, double s) {
  const double gamma = m.gamma();
  const double ed = m.epsilon_d;
  const double decay = std::exp(-0.5 * gamma * s);
  std::array<AbcCoefficients, 2> out;
  out[0] = {p.a0 + 0.5, p.b0 + 0.5 * decay, p.c0, 0.0};
  out[1] = {p.a1 + 0.5 * ed, p.b1 + 0.5 * ed * decay, p.c1, p.d};
  if (s > 0.0) {
    const double e = ei_pair(0.5 * gamma * s);
    out[0].c += 0.5 * decay;
    out[1].c += -1.0 / (kPi * s) + 0.5 * ed * decay + gamma / (4.0 * kPi) * e;
    out[1].d += -gamma / (4.0 * kPi) * e;
  }
  return out;
}

double elapsed(const SingleDotModel& m, double t, const char* op) {
  const double s = t - m.t0;
  if (!(s >= 0.0) || !std::isfinite(s)) {
    std::ostringstream os;
    os << op << ": time " << t << " precedes t0 = " << m.t0;
    throw std::invalid_argument(os.str());
  }
  return s;
}

void require_coupled(const SingleDotModel& m, const char* op) {
  if (!(m.gamma() > 0.0)) throw InvalidModel("reservoirs.gamma", std::string(op) + " needs Gamma_L + Gamma_R > 0");
}

struct AllCoefficients {
  std::array<std::array<AbcCoefficients, 2>, 2> lead;  // [lead][moment]
};

AllCoefficients all_coefficients(const SingleDotModel& m, double s, bool energy, const QuadratureSpec& spec) {
  AllCoefficients c;
  for (Lead l : {Lead::L, Lead::R}) c.lead[index(l)] = full_coefficients(lead_pieces(m, l, s, energy, spec), m, s);
  return c;
}

}  // namespace

AbcCoefficients he_abc(const SingleDotModel& m, Lead lead, int moment, double t, const QuadratureSpec& spec) {
  m.validate();
  require_coupled(m, "he_abc");
  if (moment != 0 && moment != 1) throw std::invalid_argument("he_abc: moment must be 0 or 1");
  const double s = elapsed(m, t, "he_abc");
  return full_coefficients(lead_pieces(m, lead, s, moment == 1, spec), m, s)[static_cast<std::size_t>(moment)];
}

CurrentTerms he_current_particle_terms(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec) {
  m.validate();
  const double s = elapsed(m, t, "he_current_particle");
  const double ga = m.lead(lead).gamma;
  CurrentTerms out;
  if (ga == 0.0) return out;
  const double gamma = m.gamma();
  const AllCoefficients c = all_coefficients(m, s, false, spec);
  const auto& own = c.lead[index(lead)][0];
  double wa = 0, wb = 0;
  for (Lead b : {Lead::L, Lead::R}) {
    const double w = m.lead(b).gamma / gamma;
    wa += w * c.lead[index(b)][0].a;
    wb += w * c.lead[index(b)][0].b;
  }
  const double e1 = std::exp(-gamma * s);
  const double e2 = std::exp(-0.5 * gamma * s);
  out.initial = -ga * m.n_d * e1;
  out.stationary = ga * (own.a - wa);
  out.transient = ga * (-e1 * wa - e2 * (own.b - 2.0 * wb - own.c));
  return out;
}

double he_current_particle(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec) {
  return he_current_particle_terms(m, lead, t, spec).total();
}

CurrentTerms he_current_energy_terms(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec) {
  m.validate();
  const double s = elapsed(m, t, "he_current_energy");
  const double ga = m.lead(lead).gamma;
  CurrentTerms out;
  if (ga == 0.0) return out;
  const double gamma = m.gamma();
  const double ed = m.epsilon_d;
  const AllCoefficients c = all_coefficients(m, s, true, spec);
  const auto& own = c.lead[index(lead)][1];
  double wa0 = 0, wb0 = 0, wa1 = 0, wb1 = 0, wd = 0;
  for (Lead b : {Lead::L, Lead::R}) {
    const double w = m.lead(b).gamma / gamma;
    wa0 += w * c.lead[index(b)][0].a;
    wb0 += w * c.lead[index(b)][0].b;
    wa1 += w * c.lead[index(b)][1].a;
    wb1 += w * c.lead[index(b)][1].b;
    wd += w * c.lead[index(b)][1].d;
  }
  const double e1 = std::exp(-gamma * s);
  const double e2 = std::exp(-0.5 * gamma * s);
  out.initial = -ga * ed * m.n_d * e1;
  out.stationary = ga * (own.a - wa1);
  out.transient = ga * (-ed * e1 * wa0 - e2 * (own.b - wb1 - own.c - ed * wb0 - wd));
  return out;
}

EnergyCurrent he_current_energy(const SingleDotModel& m, Lead lead, double t, const QuadratureSpec& spec) {
  EnergyCurrent out;
  out.value = he_current_energy_terms(m, lead, t, spec).total();
  out.wbl_shorttime_warning = m.gamma() > 0.0 && (t - m.t0) < kWblShortTime / m.gamma();
  return out;
}

SteadyCurrents he_current_steady(const SingleDotModel& m, Lead lead, const QuadratureSpec& spec) {
  m.validate();
  require_coupled(m, "he_current_steady");
  const double gamma = m.gamma();
  const double ga = m.lead(lead).gamma;
  const Lead o = other(lead);
  const LeadPieces pa = lead_pieces(m, lead, 0.0, false, spec);
  const LeadPieces po = lead_pieces(m, o, 0.0, false, spec);
  const double w = m.lead(o).gamma / gamma;
  // A_a - sum_b w_b A_b = w_o (A_a - A_o); the step references cancel.
  return SteadyCurrents{ga * w * (pa.a0 - po.a0), ga * w * (pa.a1 - po.a1)};
}

double he_occupation(const SingleDotModel& m, double t, const QuadratureSpec& spec) {
  m.validate();
  const double s = elapsed(m, t, "he_occupation");
  const double gamma = m.gamma();
  if (gamma == 0.0) return m.n_d;
  const AllCoefficients c = all_coefficients(m, s, false, spec);
  const double e2 = std::exp(-0.5 * gamma * s);
  double n = e2 * e2 * m.n_d;
  for (Lead b : {Lead::L, Lead::R}) {
    const auto& k = c.lead[index(b)][0];
    n += m.lead(b).gamma / gamma * (k.a - 2.0 * e2 * k.b + e2 * e2 * k.a);
  }
  return n;
}

}  // namespace qt
