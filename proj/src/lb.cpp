#include "qtransport/lb.hpp"

#include <cmath>
#include <vector>

#include "qtransport/simd.hpp"
#include "qtransport/windows.hpp"

namespace qt {

double transmission(const SingleDotModel& m, double epsilon) {
  const double gl = m.lead(Lead::L).gamma, gr = m.lead(Lead::R).gamma;
  const double g = gl + gr;
  const double x = epsilon - m.epsilon_d;
  return gl * gr / (0.25 * g * g + x * x);
}

namespace {

// moment 0 or 1 of T(e) (f_a - f_b) / (2 pi)
double lb_moment(const SingleDotModel& m, Lead a, int moment, const QuadratureSpec& spec) {
  m.validate();
  const Reservoir& ra = m.lead(a);
  const Reservoir& rb = m.lead(other(a));
  const double gamma = m.gamma();
  const double pref = ra.gamma * rb.gamma / (gamma * kTwoPi);
  BatchIntegrand f = [&](std::span<const double> x, std::span<cplx> out) {
    double fa[32], fb[32];
    for (std::size_t off = 0; off < x.size(); off += 32) {
      const std::size_t n = std::min<std::size_t>(32, x.size() - off);
      simd::fermi_lorentz_batch(x.data() + off, n, ra.mu, ra.temperature, m.epsilon_d, gamma, fa);
      simd::fermi_lorentz_batch(x.data() + off, n, rb.mu, rb.temperature, m.epsilon_d, gamma, fb);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = moment == 0 ? 1.0 : x[off + i];
        out[off + i] = pref * w * (fa[i] - fb[i]);
      }
    }
  };
  return integrate_real_line(f, dot_window(m.epsilon_d, gamma, m.reservoirs), spec).value.real();
}

double sign_for(Lead a, Lead b) { return a == b ? 1.0 : -1.0; }

}  // namespace

double lb_current_particle(const SingleDotModel& m, Lead a, const QuadratureSpec& spec) {
  return lb_moment(m, a, 0, spec);
}

double lb_current_energy(const SingleDotModel& m, Lead a, const QuadratureSpec& spec) {
  return lb_moment(m, a, 1, spec);
}

double lb_current_particle_zero_temperature(const SingleDotModel& m, Lead a) {
  const double gl = m.lead(Lead::L).gamma, gr = m.lead(Lead::R).gamma;
  const double g = gl + gr;
  const double h = 0.5 * g;
  const double ua = (m.lead(a).mu - m.epsilon_d) / h;
  const double ub = (m.lead(other(a)).mu - m.epsilon_d) / h;
  return gl * gr / (kPi * g) * (std::atan(ua) - std::atan(ub));
}

double lb_current_energy_zero_temperature(const SingleDotModel& m, Lead a) {
  const double gl = m.lead(Lead::L).gamma, gr = m.lead(Lead::R).gamma;
  const double g = gl + gr;
  const double h = 0.5 * g;
  const double xa = m.lead(a).mu - m.epsilon_d;
  const double xb = m.lead(other(a)).mu - m.epsilon_d;
  // int (x + e_d) / (h^2 + x^2) dx = 0.5 log(h^2 + x^2) + e_d / h atan(x / h)
  const double prim_a = 0.5 * std::log(h * h + xa * xa) + m.epsilon_d / h * std::atan(xa / h);
  const double prim_b = 0.5 * std::log(h * h + xb * xb) + m.epsilon_d / h * std::atan(xb / h);
  return gl * gr / kTwoPi * (prim_a - prim_b);
}

ShotNoiseParts lb_shot_noise_parts(const SingleDotModel& m, const QuadratureSpec& spec) {
  m.validate();
  const Reservoir& rl = m.lead(Lead::L);
  const Reservoir& rr = m.lead(Lead::R);
  const double gamma = m.gamma();
  auto make = [&](bool thermal) {
    return BatchIntegrand([&, thermal](std::span<const double> x, std::span<cplx> out) {
      double fl[32], fr[32];
      for (std::size_t off = 0; off < x.size(); off += 32) {
        const std::size_t n = std::min<std::size_t>(32, x.size() - off);
        simd::fermi_batch(x.data() + off, n, rl.mu, rl.temperature, fl);
        simd::fermi_batch(x.data() + off, n, rr.mu, rr.temperature, fr);
        for (std::size_t i = 0; i < n; ++i) {
          const double t = transmission(m, x[off + i]);
          const double v = thermal ? t * (fl[i] * (1.0 - fl[i]) + fr[i] * (1.0 - fr[i]))
                                   : t * (1.0 - t) * (fl[i] - fr[i]) * (fl[i] - fr[i]);
          out[off + i] = v / kTwoPi;
        }
      }
    });
  };
  const EnergyWindow w = dot_window(m.epsilon_d, gamma, m.reservoirs);
  ShotNoiseParts p;
  p.thermal = integrate_real_line(make(true), w, spec).value.real();
  p.shot = integrate_real_line(make(false), w, spec).value.real();
  return p;
}

double lb_shot_noise(const SingleDotModel& m, Lead a, Lead b, const QuadratureSpec& spec) {
  const ShotNoiseParts p = lb_shot_noise_parts(m, spec);
  return sign_for(a, b) * (p.thermal + p.shot);
}

}  // namespace qt
