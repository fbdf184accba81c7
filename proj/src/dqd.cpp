#include "qtransport/dqd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "he_common.hpp"

namespace qt {

namespace {

double elapsed(const DqdModel& m, double t, const char* who) {
  const double s = t - m.t0;
  if (!(s >= 0.0)) {
    std::ostringstream os;
    os << who << ": requires t >= t0 (t = " << t << ", t0 = " << m.t0 << ")";
    throw std::invalid_argument(os.str());
  }
  return s;
}

void check_dot(int dot) {
  if (dot != 1 && dot != 2) throw std::invalid_argument("dot index must be 1 or 2");
}

// L <-> R and 1 <-> 2.
DqdModel relabeled(const DqdModel& m) {
  DqdModel r = m;
  std::swap(r.n1, r.n2);
  r.reservoirs[0] = m.reservoirs[1];
  r.reservoirs[1] = m.reservoirs[0];
  r.reservoirs[0].label = Lead::L;
  r.reservoirs[1].label = Lead::R;
  return r;
}

ComplexMatrix drift_matrix(const DqdModel& m) {
  const cplx i1(0.0, 1.0);
  ComplexMatrix a(2, 2);
  const double g1 = m.configuration == DqdConfiguration::Parallel ? m.gamma() : m.lead(Lead::L).gamma;
  const double g2 = m.configuration == DqdConfiguration::Parallel ? m.gamma() : m.lead(Lead::R).gamma;
  a << -(0.5 * g1 + i1 * m.epsilon_d), -i1 * m.g, -i1 * m.g, -(0.5 * g2 + i1 * m.epsilon_d);
  return a;
}

// sinh(a x) / a, continuous at a = 0.
double sinh_ratio(double a, double x) { return a == 0.0 ? x : std::sinh(a * x) / a; }

EnergyWindow dqd_window(const DqdModel& m, const DqdEigenStructure& es, const QuadratureSpec& spec) {
  double width = 1e300;
  for (const cplx& l : es.lambda) width = std::min(width, -l.real());
  EnergyWindow w;
  w.center = m.epsilon_d;
  double reach = 4.0 * m.gamma() + 2.0 * m.g;
  double finest = width;
  for (const auto& r : m.reservoirs) {
    reach = std::max(reach, std::abs(r.mu - m.epsilon_d) + 40.0 * r.temperature);
    finest = std::min(finest, r.temperature);
    w.breakpoints.push_back(r.mu);
  }
  for (const cplx& l : es.lambda) w.breakpoints.push_back(-l.imag());
  w.scale = reach / spec.window_halfwidth;
  w.resolution = 0.25 * finest;
  return w;
}

}  // namespace

DqdEigenStructure dqd_eigenstructure(const DqdModel& m) {
  m.validate();
  DqdEigenStructure out;
  out.configuration = m.configuration;
  out.a = drift_matrix(m);
  out.gamma_asym = m.gamma_asym();
  const double gamma = m.gamma();
  if (m.configuration == DqdConfiguration::Parallel) {
    // Fixed basis (1, +-1)/sqrt 2; valid at g = 0 as well.
    out.lambda = {cplx(-0.5 * gamma, -(m.epsilon_d + m.g)), cplx(-0.5 * gamma, -(m.epsilon_d - m.g))};
    const double h = 1.0 / std::sqrt(2.0);
    out.s = ComplexMatrix(2, 2);
    out.s << h, h, h, -h;
    out.s_inv = out.s;
    return out;
  }
  out.eta = m.eta();
  // Larger real part first, which is the +eta root.
  const Eig2x2 e = eig2x2(out.a);
  out.lambda = {e.lambda_plus, e.lambda_minus};
  out.s = e.s;
  out.s_inv = e.s_inv;
  return out;
}

ComplexMatrix dqd_propagator(const DqdModel& m, double t) {
  const double s = elapsed(m, t, "dqd_propagator");
  const DqdEigenStructure es = dqd_eigenstructure(m);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  for (int l = 0; l < 2; ++l) d += es.s.col(l) * std::exp(es.lambda[static_cast<std::size_t>(l)] * s) * es.s_inv.row(l);
  return d;
}

std::array<double, 2> dqd_lead_rates(const DqdModel& m, Lead a) {
  const double ga = m.lead(a).gamma;
  if (m.configuration == DqdConfiguration::Parallel) return {ga, ga};
  return a == Lead::L ? std::array<double, 2>{ga, 0.0} : std::array<double, 2>{0.0, ga};
}

ComplexMatrix dqd_m_matrix(const DqdModel& m, Lead a, double t, const QuadratureSpec& spec) {
  const double s = elapsed(m, t, "dqd_m_matrix");
  const DqdEigenStructure es = dqd_eigenstructure(m);
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  if (s == 0.0) return out;
  const double gamma = m.gamma();
  const Reservoir r = m.lead(a);
  const EnergyWindow win = dqd_window(m, es, spec);
  for (int l = 0; l < 2; ++l) {
    for (int lp = l; lp < 2; ++lp) {
      const cplx lb = std::conj(es.lambda[static_cast<std::size_t>(l)]);
      const cplx lk = es.lambda[static_cast<std::size_t>(lp)];
      const cplx both = std::exp((lb + lk) * s);
      const cplx eb = std::exp(lb * s), ek = std::exp(lk * s);
      // conj(G_l) G_l' = [e^{(lb+lk)s} + 1 - e^{lb s} e^{-i e s} - e^{lk s} e^{i e s}] / (4 (lb - i e)(lk + i e))
      auto den = [=](double e) { return 4.0 * (lb - cplx(0.0, e)) * (lk + cplx(0.0, e)); };
      std::vector<IntegrandTerm> terms;
      terms.push_back({detail::with_fermi(r, false,
                                          [=](double e, double f) { return gamma * (both + 1.0) * f / den(e) / kTwoPi; }),
                       0.0});
      terms.push_back({detail::with_fermi(r, false,
                                          [=](double e, double f) {
                                            const cplx ph = std::exp(cplx(0.0, e * s));
                                            return -gamma * (eb * std::conj(ph) + ek * ph) * f / den(e) / kTwoPi;
                                          }),
                       s});
      const cplx v = integrate_real_line(terms, win, spec).value;
      out(l, lp) = v;
      if (lp != l) out(lp, l) = std::conj(v);
    }
  }
  return out;
}

ComplexMatrix dqd_population_coefficients(const DqdModel& m, int dot, Lead a) {
  check_dot(dot);
  const DqdEigenStructure es = dqd_eigenstructure(m);
  const auto rates = dqd_lead_rates(m, a);
  const int n = dot - 1;
  ComplexMatrix c = ComplexMatrix::Zero(2, 2);
  for (int l = 0; l < 2; ++l)
    for (int lp = 0; lp < 2; ++lp)
      for (int k = 0; k < 2; ++k)
        c(l, lp) += rates[static_cast<std::size_t>(k)] * 4.0 / m.gamma() * std::conj(es.s(n, l) * es.s_inv(l, k)) *
                    es.s(n, lp) * es.s_inv(lp, k);
  return c;
}

DqdPopulation dqd_he_population_terms(const DqdModel& m, int dot, double t, const QuadratureSpec& spec) {
  check_dot(dot);
  if (dot == 2) return dqd_he_population_terms(relabeled(m), 1, t, spec);
  const ComplexMatrix d = dqd_propagator(m, t);
  DqdPopulation p;
  p.initial = std::norm(d(0, 0)) * m.n1 + std::norm(d(0, 1)) * m.n2;
  for (Lead a : {Lead::L, Lead::R}) {
    if (m.lead(a).gamma == 0.0) continue;
    const ComplexMatrix c = dqd_population_coefficients(m, 1, a);
    const ComplexMatrix mm = dqd_m_matrix(m, a, t, spec);
    p.bath += c.cwiseProduct(mm).sum().real();
  }
  return p;
}

double dqd_he_population(const DqdModel& m, int dot, double t, const QuadratureSpec& spec) {
  return dqd_he_population_terms(m, dot, t, spec).total();
}

DqdPopulation dqd_me_population_local_terms(const DqdModel& m, int dot, double t) {
  check_dot(dot);
  m.validate();
  if (dot == 2) return dqd_me_population_local_terms(relabeled(m), 1, t);
  const double s = elapsed(m, t, "dqd_me_population_local");
  const double gamma = m.gamma();
  const double ga = m.gamma_asym();
  const double eta = m.eta();
  if (eta == 0.0) throw DegenerateSpectrum("local master equation closed form needs eta > 0 (g < |Gamma_L - Gamma_R| / 4)");
  const double g2 = m.g * m.g, eta2 = eta * eta;
  const double nbar = 0.5 * (m.n1 + m.n2), dn = 0.5 * (m.n1 - m.n2);
  DqdPopulation p;
  p.initial = std::exp(-0.5 * gamma * s) / eta2 *
              (-g2 * nbar + (ga * ga * m.n1 - g2 * dn) * std::cosh(2.0 * eta * s) - m.n1 * ga * eta * std::sinh(2.0 * eta * s));
  for (Lead a : {Lead::L, Lead::R}) {
    const Reservoir& r = m.lead(a);
    const double w = r.gamma / gamma * fermi(r, m.epsilon_d);
    for (int mi : {1, -1}) {
      for (int mj : {1, -1}) {
        const double sign = (mi == mj && a == Lead::R) ? -1.0 : 1.0;
        const double k = 0.25 + 0.5 * (mi + mj) * eta / gamma;
        p.bath -= g2 / eta2 * sign * w * std::exp(-s * gamma * k) / 4.0 * sinh_ratio(k, s * gamma);
      }
    }
  }
  const Reservoir& l = m.lead(Lead::L);
  for (int mi : {1, -1}) {
    const double k = 0.25 + mi * eta / gamma;
    p.bath += l.gamma / gamma * fermi(l, m.epsilon_d) * ga / eta2 * std::exp(-s * gamma * k) / 2.0 *
              sinh_ratio(k, s * gamma) * (ga + mi * eta);
  }
  return p;
}

double dqd_me_population_local(const DqdModel& m, int dot, double t) {
  return dqd_me_population_local_terms(m, dot, t).total();
}

DqdPopulation dqd_me_population_global_terms(const DqdModel& m, int dot, double t, double rate_factor) {
  check_dot(dot);
  m.validate();
  if (dot == 2) return dqd_me_population_global_terms(relabeled(m), 1, t, rate_factor);
  const double s = elapsed(m, t, "dqd_me_population_global");
  const double gamma = m.gamma();
  // Each eigenmode relaxes at rate_factor * Gamma / 2.
  const double kappa = 0.5 * rate_factor * gamma;
  const double nbar = 0.5 * (m.n1 + m.n2), dn = 0.5 * (m.n1 - m.n2);
  DqdPopulation p;
  p.initial = std::exp(-kappa * s) * (nbar + dn * std::cos(2.0 * m.g * s));
  for (const auto& r : m.reservoirs) {
    p.bath += r.gamma / gamma * 0.5 * (1.0 - std::exp(-kappa * s)) *
              (fermi(r, m.epsilon_d + m.g) + fermi(r, m.epsilon_d - m.g));
  }
  return p;
}

double dqd_me_population_global(const DqdModel& m, int dot, double t, double rate_factor) {
  return dqd_me_population_global_terms(m, dot, t, rate_factor).total();
}

namespace {

ComplexMatrix site_lowering(int dot) {
  ComplexMatrix l = ComplexMatrix::Zero(4, 4);
  if (dot == 1) {
    l(0, 1) = 1.0;
    l(2, 3) = 1.0;
  } else {
    l(0, 2) = 1.0;
    l(1, 3) = 1.0;
  }
  return l;
}

ComplexMatrix dqd_hamiltonian(const DqdModel& m) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(1, 1) = m.epsilon_d;
  h(2, 2) = m.epsilon_d;
  h(3, 3) = 2.0 * m.epsilon_d;
  h(1, 2) = m.g;
  h(2, 1) = m.g;
  return h;
}

}  // namespace

LindbladSpec dqd_local_lindblad(const DqdModel& m) {
  m.validate();
  LindbladSpec spec;
  spec.hamiltonian = dqd_hamiltonian(m);
  for (Lead a : {Lead::L, Lead::R}) {
    const Reservoir& r = m.lead(a);
    const double f = fermi(r, m.epsilon_d);
    const int dot = a == Lead::L ? 1 : 2;
    spec.jumps.push_back(JumpSpec{a, dot, site_lowering(dot), r.gamma * f, r.gamma * (1.0 - f), 1.0});
  }
  return spec;
}

LindbladSpec dqd_global_lindblad(const DqdModel& m, double rate_factor) {
  m.validate();
  LindbladSpec spec;
  spec.hamiltonian = dqd_hamiltonian(m);
  const double h = 1.0 / std::sqrt(2.0);
  // |e_+-> = (|10> +- |01>) / sqrt 2
  std::array<Eigen::Vector4cd, 2> mode;
  mode[0] << 0.0, h, h, 0.0;
  mode[1] << 0.0, h, -h, 0.0;
  Eigen::Vector4cd vac = Eigen::Vector4cd::Zero(), full = Eigen::Vector4cd::Zero();
  vac(0) = 1.0;
  full(3) = 1.0;
  const ComplexMatrix p0 = vac * vac.adjoint(), p2 = full * full.adjoint();
  for (Lead a : {Lead::L, Lead::R}) {
    const Reservoir& r = m.lead(a);
    const ComplexMatrix sm = site_lowering(a == Lead::L ? 1 : 2);
    for (int k = 0; k < 2; ++k) {
      const ComplexMatrix pk = mode[static_cast<std::size_t>(k)] * mode[static_cast<std::size_t>(k)].adjoint();
      const ComplexMatrix pother = mode[static_cast<std::size_t>(1 - k)] * mode[static_cast<std::size_t>(1 - k)].adjoint();
      const ComplexMatrix jump = p0 * sm * pk + pother * sm * p2;
      const double energy = m.epsilon_d + (k == 0 ? m.g : -m.g);
      const double f = fermi(r, energy);
      spec.jumps.push_back(JumpSpec{a, k, jump, rate_factor * r.gamma * f, rate_factor * r.gamma * (1.0 - f), 1.0});
    }
  }
  return spec;
}

ComplexVector dqd_initial_state(const DqdModel& m) {
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = (1.0 - m.n1) * (1.0 - m.n2);
  rho(1, 1) = m.n1 * (1.0 - m.n2);
  rho(2, 2) = (1.0 - m.n1) * m.n2;
  rho(3, 3) = m.n1 * m.n2;
  return vectorize(rho);
}

double dqd_occupation(const ComplexVector& rho, int dot) {
  check_dot(dot);
  const ComplexMatrix r = unvectorize(rho, 4);
  return dot == 1 ? (r(1, 1) + r(3, 3)).real() : (r(2, 2) + r(3, 3)).real();
}

}  // namespace qt
