#include "qtransport/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qtransport/he_single.hpp"
#include "qtransport/lb.hpp"
#include "qtransport/me_single.hpp"
#include "qtransport/parallel.hpp"

namespace qt {

void WeakCouplingPlan::validate() const {
  if (gamma_sequence.size() < 2) throw InvalidModel("gamma_sequence", "needs at least two points");
  for (std::size_t i = 0; i < gamma_sequence.size(); ++i) {
    if (!(gamma_sequence[i] > 0.0) || !std::isfinite(gamma_sequence[i]))
      throw InvalidModel("gamma_sequence", "entries must be positive and finite");
    if (i > 0 && !(gamma_sequence[i] < gamma_sequence[i - 1]))
      throw InvalidModel("gamma_sequence", "must be strictly decreasing");
  }
  if (!(scaled_time > 0.0) || !std::isfinite(scaled_time)) throw InvalidModel("scaled_time", "must be > 0");
  if (order < 0) throw InvalidModel("order", "must be >= 0");
  if (eta_ratio && !(*eta_ratio >= 0.0)) throw InvalidModel("eta_ratio", "must be >= 0");
  if (gamma_ref && !(*gamma_ref > 0.0)) throw InvalidModel("gamma_ref", "must be > 0");
}

cplx neville_at_zero(const std::vector<double>& x, const std::vector<cplx>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("neville_at_zero: size mismatch");
  std::vector<cplx> p = y;
  const std::size_t n = x.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i) p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
  return p[0];
}

WeakCouplingResult weak_coupling_limit(const WeakCouplingObservable& observable, const WeakCouplingPlan& plan,
                                       int workers) {
  plan.validate();
  const auto& g = plan.gamma_sequence;
  const std::size_t n = g.size();
  WeakCouplingResult out;
  out.gammas = g;
  out.scaled_samples.resize(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const cplx v = observable(g[i], plan.scaled_time / g[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "weak_coupling_limit: observable not finite at Gamma = " << g[i];
      throw NonFinite(os.str());
    }
    out.scaled_samples[i] = v / std::pow(g[i], plan.order);
  });
  out.limit_scaled = neville_at_zero(g, out.scaled_samples);
  const std::vector<double> gt(g.begin() + 1, g.end());
  const std::vector<cplx> yt(out.scaled_samples.begin() + 1, out.scaled_samples.end());
  out.error = std::abs(out.limit_scaled - neville_at_zero(gt, yt));
  out.gamma_ref = plan.gamma_ref.value_or(g.front());
  out.limit = out.limit_scaled * std::pow(out.gamma_ref, plan.order);

  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < n; ++i) diffs.push_back(std::abs(out.scaled_samples[i + 1] - out.scaled_samples[i]));
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
    if (!(diffs[i + 1] < diffs[i])) out.monotone = false;
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
    if (diffs[i] > 0.0 && diffs[i + 1] > 0.0)
      slopes.push_back(std::log(diffs[i] / diffs[i + 1]) / std::log(g[i] / g[i + 1]));
  }
  if (slopes.empty()) {
    out.convergence_order = std::numeric_limits<double>::quiet_NaN();
  } else {
    std::sort(slopes.begin(), slopes.end());
    const std::size_t k = slopes.size();
    out.convergence_order = k % 2 ? slopes[k / 2] : 0.5 * (slopes[k / 2 - 1] + slopes[k / 2]);
  }
  return out;
}

cplx stationary_limit(const std::function<cplx(double elapsed)>& observable, double gamma) {
  if (!(gamma > 0.0)) throw InvalidModel("gamma", "stationary_limit needs Gamma > 0");
  const cplx a = observable(40.0 / gamma);
  const cplx b = observable(60.0 / gamma);
  if (std::abs(a - b) > 1e-8 * std::max(1.0, std::abs(b))) {
    std::ostringstream os;
    os << "stationary_limit: values at Gamma t = 40 and 60 differ by " << std::abs(a - b);
    throw NotStationary(os.str());
  }
  return b;
}

SingleDotModel with_total_coupling(const SingleDotModel& m, double gamma) {
  SingleDotModel out = m;
  const double scale = gamma / m.gamma();
  for (auto& r : out.reservoirs) r.gamma *= scale;
  return out;
}

DqdModel with_total_coupling(const DqdModel& m, double gamma, std::optional<double> eta_ratio) {
  DqdModel out = m;
  const double scale = gamma / m.gamma();
  for (auto& r : out.reservoirs) r.gamma *= scale;
  if (eta_ratio) {
    const double ga = out.gamma_asym();
    const double eta = *eta_ratio * gamma;
    if (eta > std::abs(ga)) throw InvalidModel("eta_ratio", "eta / Gamma exceeds |Gamma_L - Gamma_R| / (4 Gamma)");
    out.g = std::sqrt(std::max(0.0, ga * ga - eta * eta));
  }
  return out;
}

const char* report_observable_name(ReportObservable o) {
  return o == ReportObservable::CurrentParticle ? "current_particle" : "current_energy";
}

namespace {

struct ReportPoint {
  double he = std::numeric_limits<double>::quiet_NaN();
  double me = std::numeric_limits<double>::quiet_NaN();
  double lb = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

}  // namespace

CurveTable framework_report(const SingleDotModel& m, const std::vector<ReportObservable>& observables,
                            const std::vector<double>& scaled_times, const ReportTolerances& tol,
                            const QuadratureSpec& spec, int workers) {
  m.validate();
  const double gamma = m.gamma();
  CurveTable table({"kind", "observable", "lead", "t_gamma", "he", "me", "lb", "deviation", "tolerance", "pass", "error"});
  table.metadata()["report"] = "framework_comparison";
  table.metadata()["steady_relative"] = tol.steady_relative;
  table.metadata()["transient_fraction"] = tol.transient_fraction;

  // Layout: per (observable, lead): one steady point then the time grid.
  const std::size_t per = scaled_times.size() + 1;
  const std::size_t blocks = observables.size() * 2;
  std::vector<ReportPoint> points(blocks * per);
  parallel_for(points.size(), workers, [&](std::size_t idx) {
    const std::size_t block = idx / per, k = idx % per;
    const ReportObservable obs = observables[block / 2];
    const Lead lead = block % 2 == 0 ? Lead::L : Lead::R;
    const bool particle = obs == ReportObservable::CurrentParticle;
    ReportPoint& p = points[idx];
    try {
      p.lb = particle ? lb_current_particle(m, lead) : lb_current_energy(m, lead);
      if (k == 0) {
        const SteadyCurrents ss = he_current_steady(m, lead, spec);
        p.he = particle ? ss.particle : ss.energy;
        const double late = m.t0 + 60.0 / gamma;
        p.me = particle ? me_current_particle(m, lead, late) : me_current_energy(m, lead, late);
      } else {
        const double t = m.t0 + scaled_times[k - 1] / gamma;
        p.he = particle ? he_current_particle(m, lead, t, spec) : he_current_energy(m, lead, t, spec).value;
        p.me = particle ? me_current_particle(m, lead, t) : me_current_energy(m, lead, t);
      }
    } catch (const std::exception& e) {
      p.error = e.what();
    }
  });

  for (std::size_t block = 0; block < blocks; ++block) {
    const ReportObservable obs = observables[block / 2];
    const Lead lead = block % 2 == 0 ? Lead::L : Lead::R;
    double scale = 0.0;
    for (std::size_t k = 1; k < per; ++k) {
      const double v = points[block * per + k].he;
      if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t k = 0; k < per; ++k) {
      const ReportPoint& p = points[block * per + k];
      double deviation, tolerance;
      if (k == 0) {
        deviation = std::abs(p.he - p.lb);
        tolerance = tol.steady_relative * std::max(std::abs(p.lb), 1e-6 * gamma);
      } else {
        deviation = std::abs(p.he - p.me);
        tolerance = tol.transient_fraction * scale;
      }
      const bool pass = p.error.empty() && deviation <= tolerance;
      const double t_gamma = k == 0 ? std::numeric_limits<double>::infinity() : scaled_times[k - 1];
      table.add_row({std::string(k == 0 ? "steady" : "transient"), std::string(report_observable_name(obs)),
                     std::string(lead_name(lead)), t_gamma, p.he, p.me, p.lb, deviation, tolerance,
                     std::string(pass ? "true" : "false"), p.error});
    }
  }
  return table;
}

}  // namespace qt
