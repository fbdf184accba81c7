#include "qtransport/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "qtransport/crosscheck.hpp"
#include "qtransport/dqd.hpp"
#include "qtransport/fcs.hpp"
#include "qtransport/he_single.hpp"
#include "qtransport/lb.hpp"
#include "qtransport/me_single.hpp"
#include "qtransport/parallel.hpp"

namespace qt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ScanPoint {
  std::vector<double> values;
  SingleDotModel single;
  DqdModel dqd;
  std::string label;
  // fcs engines, built only when requested
  std::optional<DressedLiouvillian> fcs_particle, fcs_energy, fcs_local, fcs_global;
  ComplexVector rho0;

  double gamma(ModelKind k) const { return k == ModelKind::SingleDot ? single.gamma() : dqd.gamma(); }
  double t0(ModelKind k) const { return k == ModelKind::SingleDot ? single.t0 : dqd.t0; }
};

std::vector<ScanPoint> scan_points(const SweepConfig& c) {
  std::vector<std::vector<double>> combos{{}};
  for (const ScanAxis& axis : c.scan) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : combos)
      for (double v : axis.values) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    combos = std::move(next);
  }
  std::vector<ScanPoint> out;
  out.reserve(combos.size());
  for (const auto& combo : combos) {
    ScanPoint p;
    p.values = combo;
    p.single = c.single;
    p.dqd = c.dqd;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < c.scan.size(); ++i) {
        if (is_relative_scan_parameter(c.scan[i].parameter) != (pass == 1)) continue;
        if (c.model_kind == ModelKind::SingleDot)
          apply_scan_parameter(p.single, c.scan[i].parameter, combo[i]);
        else
          apply_scan_parameter(p.dqd, c.scan[i].parameter, combo[i]);
      }
    for (std::size_t i = 0; i < c.scan.size(); ++i)
      p.label += (i ? ", " : "") + c.scan[i].parameter + "=" + format_number(combo[i]);
    try {
      if (c.model_kind == ModelKind::SingleDot)
        p.single.validate();
      else
        p.dqd.validate();
    } catch (const InvalidModel& e) {
      throw ConfigError("scan", "point (" + p.label + ") gives an invalid model: " + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

void build_fcs(const SweepConfig& c, ScanPoint& p) {
  if (std::find(c.frameworks.begin(), c.frameworks.end(), Framework::Fcs) == c.frameworks.end()) return;
  if (c.model_kind == ModelKind::SingleDot) {
    p.fcs_particle.emplace(build_liouvillian(single_dot_lindblad(p.single, false)));
    p.fcs_energy.emplace(build_liouvillian(single_dot_lindblad(p.single, true)));
    p.rho0 = single_dot_initial_state(p.single);
  } else {
    p.fcs_local.emplace(build_liouvillian(dqd_local_lindblad(p.dqd)));
    p.fcs_global.emplace(build_liouvillian(dqd_global_lindblad(p.dqd, c.global_rate_factor)));
    p.rho0 = dqd_initial_state(p.dqd);
  }
}

struct GridPoint {
  double t = kNaN, t_prime = kNaN, omega = kNaN;
  double scaled = kNaN, scaled_prime = kNaN;
};

std::vector<GridPoint> grid_points(const SweepConfig& c, const ScanPoint& p) {
  const double gamma = p.gamma(c.model_kind), t0 = p.t0(c.model_kind);
  std::vector<GridPoint> out;
  const auto to_abs = [&](double v) { return c.grid.scaled ? t0 + v / gamma : v; };
  switch (c.grid.kind) {
    case GridKind::None:
      out.emplace_back();
      break;
    case GridKind::Times:
      for (double v : c.grid.values) {
        GridPoint g;
        g.t = to_abs(v);
        g.scaled = (g.t - t0) * gamma;
        out.push_back(g);
      }
      break;
    case GridKind::TimePairs:
      for (const auto& [a, b] : c.grid.pairs) {
        GridPoint g;
        g.t = to_abs(a);
        g.t_prime = to_abs(b);
        g.scaled = (g.t - t0) * gamma;
        g.scaled_prime = (g.t_prime - t0) * gamma;
        out.push_back(g);
      }
      break;
    case GridKind::Frequencies:
      for (double w : c.grid.values) {
        GridPoint g;
        g.omega = w;
        g.scaled = w / gamma;
        out.push_back(g);
      }
      break;
  }
  return out;
}

void grid_columns(const SweepConfig& c, std::vector<std::string>& names) {
  switch (c.grid.kind) {
    case GridKind::None:
      break;
    case GridKind::Times:
      names.insert(names.end(), {"t", "t_gamma"});
      break;
    case GridKind::TimePairs:
      names.insert(names.end(), {"t", "t_prime", "t_gamma", "t_prime_gamma"});
      break;
    case GridKind::Frequencies:
      names.insert(names.end(), {"omega", "omega_over_gamma"});
      break;
  }
}

void grid_cells(const SweepConfig& c, const GridPoint& g, std::vector<Cell>& row) {
  switch (c.grid.kind) {
    case GridKind::None:
      break;
    case GridKind::Times:
      row.insert(row.end(), {g.t, g.scaled});
      break;
    case GridKind::TimePairs:
      row.insert(row.end(), {g.t, g.t_prime, g.scaled, g.scaled_prime});
      break;
    case GridKind::Frequencies:
      row.insert(row.end(), {g.omega, g.scaled});
      break;
  }
}

std::string pair_name(Lead a, Lead b) { return std::string(lead_name(a)) + lead_name(b); }

// Collects column names, and cell values when `evaluate` is set, in one pass
// so that both stay in the same order.
struct Emitter {
  bool evaluate = false;
  std::string where;
  std::vector<std::string> names;
  std::vector<Cell> cells;

  template <class F>
  auto guard(const std::string& op, F&& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      throw SweepNumericalError(op + "(" + where + "): " + e.what());
    }
  }
  template <class F>
  void real(const std::string& name, const std::string& op, F&& f) {
    names.push_back(name);
    if (evaluate) cells.emplace_back(static_cast<double>(guard(op, f)));
  }
  template <class F>
  void complex(const std::string& name, const std::string& op, F&& f) {
    push_complex_columns(names, name);
    if (evaluate) push_complex(cells, guard(op, f));
  }
  // Correlation with a delta part: name_delta_weight, name_re, name_im.
  template <class F>
  void weighted(const std::string& name, const std::string& op, F&& f) {
    names.push_back(name + "_delta_weight");
    push_complex_columns(names, name);
    if (evaluate) {
      const auto v = guard(op, f);
      cells.emplace_back(v.delta_weight);
      push_complex(cells, cplx(v.regular, 0.0));
    }
  }
};

void emit_single(const SweepConfig& c, const ScanPoint& p, const GridPoint& g, Emitter& e) {
  const SingleDotModel& m = p.single;
  const QuadratureSpec& q = c.quadrature;
  const Observable o = c.observable;
  const std::string obs = observable_name(o);
  for (Framework f : c.frameworks) {
    const std::string fw = framework_name(f);
    const std::string base = obs + "_" + fw;
    switch (o) {
      case Observable::CurrentParticle:
      case Observable::CurrentEnergy: {
        const bool particle = o == Observable::CurrentParticle;
        for (Lead a : c.leads) {
          const std::string name = base + "_" + lead_name(a);
          const std::string op = fw + "_" + obs + "[" + lead_name(a) + "]";
          if (f == Framework::He)
            e.real(name, op, [&] {
              return particle ? he_current_particle(m, a, g.t, q) : he_current_energy(m, a, g.t, q).value;
            });
          else if (f == Framework::Me)
            e.real(name, op, [&] { return particle ? me_current_particle(m, a, g.t) : me_current_energy(m, a, g.t); });
          else if (f == Framework::Lb)
            e.real(name, op, [&] { return particle ? lb_current_particle(m, a, q) : lb_current_energy(m, a, q); });
          else
            e.real(name, op, [&] {
              return current_via_fcs(particle ? *p.fcs_particle : *p.fcs_energy, a, g.t, DetectionResponse::delta(),
                                     p.rho0, m.t0);
            });
        }
        break;
      }
      case Observable::Population: {
        const std::string op = fw + "_population";
        if (f == Framework::He)
          e.real(base, op, [&] { return he_occupation(m, g.t, q); });
        else if (f == Framework::Me)
          e.real(base, op, [&] { return me_population(m, g.t).p1; });
        else
          e.real(base, op, [&] {
            return unvectorize(propagate(*p.fcs_particle, {0.0, 0.0}, g.t - m.t0, p.rho0), 2)(1, 1).real();
          });
        break;
      }
      case Observable::Activity:
        for (Lead a : c.leads) {
          const std::string op = fw + "_activity[" + lead_name(a) + "]";
          if (f == Framework::Me)
            e.real(base + "_" + lead_name(a), op, [&] { return me_activity(m, a, g.t); });
          else
            e.real(base + "_" + lead_name(a), op,
                   [&] { return activity_via_fcs(*p.fcs_particle, a, g.t, p.rho0, m.t0); });
        }
        break;
      case Observable::ContactCurrent:
        for (Lead a : c.leads)
          e.real(base + "_" + lead_name(a), fw + "_contact_current[" + std::string(lead_name(a)) + "]",
                 [&] { return he_contact_energy_current(m, a, g.t, q); });
        break;
      case Observable::NoiseTwoTime:
        for (const auto& [a, b] : c.lead_pairs) {
          const std::string name = base + "_" + pair_name(a, b);
          const std::string op = fw + "_noise_two_time[" + pair_name(a, b) + "]";
          if (f == Framework::He)
            e.complex(name, op, [&] { return he_noise_two_time(m, a, b, g.t, g.t_prime, q); });
          else if (f == Framework::Me)
            e.weighted(name, op, [&] { return me_noise_two_time(m, a, b, g.t, g.t_prime); });
          else
            e.weighted(name, op, [&] {
              return two_time_correlation_via_fcs(*p.fcs_particle, a, b, g.t, g.t_prime, DetectionResponse::delta(),
                                                  p.rho0, m.t0);
            });
        }
        break;
      case Observable::NoiseFrequency:
        for (const auto& [a, b] : c.lead_pairs)
          e.complex(base + "_" + pair_name(a, b), fw + "_noise_frequency[" + pair_name(a, b) + "]",
                    [&] { return he_noise_frequency_ss(m, a, b, g.omega, q); });
        break;
      case Observable::ShotNoise:
        for (const auto& [a, b] : c.lead_pairs) {
          const std::string name = base + "_" + pair_name(a, b);
          const std::string op = fw + "_shot_noise[" + pair_name(a, b) + "]";
          if (f == Framework::He)
            e.real(name, op, [&] { return he_noise_frequency_ss(m, a, b, 0.0, q).real(); });
          else if (f == Framework::Me)
            e.real(name, op, [&] { return me_noise_zero_frequency(m, a, b); });
          else
            e.real(name, op, [&] { return lb_shot_noise(m, a, b, q); });
        }
        break;
    }
  }
}

void emit_dqd(const SweepConfig& c, const ScanPoint& p, const GridPoint& g, Emitter& e) {
  const DqdModel& m = p.dqd;
  for (Framework f : c.frameworks) {
    const std::string fw = framework_name(f);
    for (int dot : c.dots) {
      const std::string suffix = "_dot" + std::to_string(dot);
      const std::string op = fw + "_population[dot" + std::to_string(dot) + "]";
      if (f == Framework::He) {
        e.real("population_he" + suffix, op, [&] { return dqd_he_population(m, dot, g.t, c.quadrature); });
      } else {
        // The local master equation describes the Series topology, the global one the Parallel topology.
        const bool local = m.configuration == DqdConfiguration::Series;
        const std::string name = "population_" + fw + (local ? "_local" : "_global") + suffix;
        if (f == Framework::Me)
          e.real(name, op, [&] {
            return local ? dqd_me_population_local(m, dot, g.t) : dqd_me_population_global(m, dot, g.t, c.global_rate_factor);
          });
        else
          e.real(name, op, [&] {
            return dqd_occupation(propagate(local ? *p.fcs_local : *p.fcs_global, {0.0, 0.0}, g.t - m.t0, p.rho0), dot);
          });
      }
    }
  }
}

std::string point_label(const ScanPoint& p, const GridPoint& g) {
  std::string s = p.label;
  const auto add = [&](const char* k, double v) {
    if (std::isnan(v)) return;
    s += (s.empty() ? "" : ", ") + std::string(k) + "=" + format_number(v);
  };
  add("t", g.t);
  add("t_prime", g.t_prime);
  add("omega", g.omega);
  return s;
}

nlohmann::ordered_json base_metadata(const SweepConfig& c) {
  nlohmann::ordered_json meta;
  meta["software"] = kSoftwareName;
  meta["version"] = kSoftwareVersion;
  meta["config"] = config_to_json(c);
  return meta;
}

std::vector<std::string> scan_columns(const SweepConfig& c) {
  std::vector<std::string> names;
  for (const ScanAxis& a : c.scan) names.push_back(a.parameter);
  return names;
}

// Uniform draws in [lo, hi] from a fixed generator, independent of the
// standard library's distribution implementation.
std::vector<double> random_times(std::uint64_t seed, int n, const std::vector<double>& given) {
  double lo = 0.1, hi = 5.0;
  if (!given.empty()) {
    lo = *std::min_element(given.begin(), given.end());
    hi = *std::max_element(given.begin(), given.end());
  }
  std::mt19937_64 gen(seed);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53);
  return out;
}

}  // namespace

CurveTable run_sweep(const SweepConfig& c, int workers) {
  if (c.mode != RunMode::Sweep) throw ConfigError("mode", "run_sweep needs mode \"sweep\"");
  std::vector<ScanPoint> points = scan_points(c);
  for (ScanPoint& p : points) build_fcs(c, p);

  std::vector<std::string> columns = scan_columns(c);
  grid_columns(c, columns);
  {
    Emitter e;
    const GridPoint g;
    if (c.model_kind == ModelKind::SingleDot)
      emit_single(c, points.front(), g, e);
    else
      emit_dqd(c, points.front(), g, e);
    columns.insert(columns.end(), e.names.begin(), e.names.end());
  }

  struct Job {
    std::size_t scan;
    GridPoint grid;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (const GridPoint& g : grid_points(c, points[i])) jobs.push_back({i, g});

  std::vector<std::vector<Cell>> rows(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t k) {
    const ScanPoint& p = points[jobs[k].scan];
    const GridPoint& g = jobs[k].grid;
    std::vector<Cell> row(p.values.begin(), p.values.end());
    grid_cells(c, g, row);
    Emitter e;
    e.evaluate = true;
    e.where = point_label(p, g);
    if (c.model_kind == ModelKind::SingleDot)
      emit_single(c, p, g, e);
    else
      emit_dqd(c, p, g, e);
    row.insert(row.end(), e.cells.begin(), e.cells.end());
    rows[k] = std::move(row);
  });

  CurveTable table(std::move(columns));
  table.metadata() = base_metadata(c);
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

namespace {

struct WeakRow {
  std::size_t scan = 0;
  Observable observable = Observable::CurrentParticle;
  std::string channel;
  Lead a = Lead::L, b = Lead::L;
  int dot = 1;
  double s = kNaN, sp = kNaN;
};

int weak_order(Observable o, ModelKind kind) {
  if (kind == ModelKind::Dqd || o == Observable::Population) return 0;
  if (o == Observable::NoiseTwoTime) return 2;
  return 1;
}

std::vector<WeakRow> weak_rows(const SweepConfig& c, std::size_t n_scan) {
  const CrosscheckSpec& x = c.crosscheck;
  std::vector<double> times = x.scaled_times;
  const std::vector<double> extra = random_times(c.seed, x.random_points, x.scaled_times);
  times.insert(times.end(), extra.begin(), extra.end());
  const std::pair<Lead, Lead> pairs[] = {{Lead::L, Lead::L}, {Lead::L, Lead::R}, {Lead::R, Lead::L}, {Lead::R, Lead::R}};
  std::vector<WeakRow> rows;
  for (std::size_t i = 0; i < n_scan; ++i)
    for (Observable o : x.observables) {
      WeakRow r;
      r.scan = i;
      r.observable = o;
      if (c.model_kind == ModelKind::Dqd) {
        for (int dot : {1, 2})
          for (double s : times) {
            r.dot = dot;
            r.channel = "dot" + std::to_string(dot);
            r.s = s;
            rows.push_back(r);
          }
        continue;
      }
      switch (o) {
        case Observable::CurrentParticle:
        case Observable::CurrentEnergy:
          for (Lead a : {Lead::L, Lead::R})
            for (double s : times) {
              r.a = a;
              r.channel = lead_name(a);
              r.s = s;
              rows.push_back(r);
            }
          break;
        case Observable::Population:
          for (double s : times) {
            r.channel = "dot";
            r.s = s;
            rows.push_back(r);
          }
          break;
        case Observable::NoiseTwoTime:
          for (const auto& [a, b] : pairs)
            for (const auto& [s, sp] : x.scaled_time_pairs) {
              r.a = a;
              r.b = b;
              r.channel = pair_name(a, b);
              r.s = s;
              r.sp = sp;
              rows.push_back(r);
            }
          break;
        case Observable::ShotNoise:
          for (const auto& [a, b] : pairs) {
            r.a = a;
            r.b = b;
            r.channel = pair_name(a, b);
            rows.push_back(r);
          }
          break;
        default:
          break;
      }
    }
  return rows;
}

CrosscheckOutcome run_weak_coupling(const SweepConfig& c, const std::vector<ScanPoint>& points, int workers) {
  const CrosscheckSpec& x = c.crosscheck;
  const std::vector<WeakRow> rows = weak_rows(c, points.size());

  struct Result {
    WeakCouplingResult r;
    double reference = kNaN;
    std::string error;
  };
  std::vector<Result> results(rows.size());
  parallel_for(rows.size(), workers, [&](std::size_t k) {
    const WeakRow& w = rows[k];
    const ScanPoint& p = points[w.scan];
    WeakCouplingPlan plan;
    plan.gamma_sequence = x.gamma_sequence;
    plan.scaled_time = std::isnan(w.s) ? 1.0 : w.s;
    plan.order = weak_order(w.observable, c.model_kind);
    plan.eta_ratio = x.eta_ratio;
    const QuadratureSpec& q = c.quadrature;
    Result& out = results[k];
    try {
      if (c.model_kind == ModelKind::Dqd) {
        const auto model_at = [&](double g) { return with_total_coupling(p.dqd, g, x.eta_ratio); };
        const auto me_at = [&](const DqdModel& m, double t) {
          return m.configuration == DqdConfiguration::Parallel
                     ? dqd_me_population_global(m, w.dot, t, c.global_rate_factor)
                     : dqd_me_population_local(m, w.dot, t);
        };
        // Parallel populations oscillate at 2g with g fixed; HE - ME is what converges.
        out.r = weak_coupling_limit(
            [&](double g, double el) {
              const DqdModel m = model_at(g);
              return cplx(dqd_he_population(m, w.dot, m.t0 + el, q) - me_at(m, m.t0 + el));
            },
            plan);
        const DqdModel ref = model_at(out.r.gamma_ref);
        out.reference = me_at(ref, ref.t0 + w.s / out.r.gamma_ref);
        out.r.limit += out.reference;
        out.r.limit_scaled += out.reference;
        return;
      }
      const auto model_at = [&](double g) { return with_total_coupling(p.single, g); };
      WeakCouplingObservable obs;
      switch (w.observable) {
        case Observable::CurrentParticle:
          obs = [&](double g, double el) {
            const SingleDotModel m = model_at(g);
            return cplx(he_current_particle(m, w.a, m.t0 + el, q));
          };
          break;
        case Observable::CurrentEnergy:
          obs = [&](double g, double el) {
            const SingleDotModel m = model_at(g);
            return cplx(he_current_energy(m, w.a, m.t0 + el, q).value);
          };
          break;
        case Observable::Population:
          obs = [&](double g, double el) {
            const SingleDotModel m = model_at(g);
            return cplx(he_occupation(m, m.t0 + el, q));
          };
          break;
        case Observable::NoiseTwoTime:
          obs = [&](double g, double) {
            const SingleDotModel m = model_at(g);
            return he_noise_two_time(m, w.a, w.b, m.t0 + w.s / g, m.t0 + w.sp / g, q);
          };
          break;
        default:
          obs = [&](double g, double) { return cplx(lb_shot_noise(model_at(g), w.a, w.b, q)); };
          break;
      }
      out.r = weak_coupling_limit(obs, plan);
      const SingleDotModel ref = model_at(out.r.gamma_ref);
      const double t = ref.t0 + plan.scaled_time / out.r.gamma_ref;
      switch (w.observable) {
        case Observable::CurrentParticle:
          out.reference = me_current_particle(ref, w.a, t);
          break;
        case Observable::CurrentEnergy:
          out.reference = me_current_energy(ref, w.a, t);
          break;
        case Observable::Population:
          out.reference = me_population(ref, t).p1;
          break;
        case Observable::NoiseTwoTime:
          out.reference =
              me_noise_two_time(ref, w.a, w.b, ref.t0 + w.s / out.r.gamma_ref, ref.t0 + w.sp / out.r.gamma_ref).regular;
          break;
        default:
          out.reference = me_noise_zero_frequency(ref, w.a, w.b);
          break;
      }
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  std::vector<std::string> columns = scan_columns(c);
  columns.insert(columns.end(), {"observable", "channel", "t_gamma", "t_prime_gamma", "order_k", "gamma_ref",
                                 "limit_re", "limit_im", "reference", "deviation", "tolerance", "error_bar",
                                 "convergence_order", "monotone", "pass", "error"});
  CrosscheckOutcome outcome;
  outcome.table = CurveTable(std::move(columns));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const WeakRow& w = rows[k];
    const Result& res = results[k];
    const int order = weak_order(w.observable, c.model_kind);
    double deviation = kNaN, tolerance = kNaN;
    bool pass = false;
    std::string error = res.error;
    if (error.empty()) {
      deviation = std::abs(res.r.limit.real() - res.reference);
      tolerance = x.relative_tolerance * std::max(std::abs(res.reference), 1e-9 * std::pow(res.r.gamma_ref, order));
      pass = deviation <= tolerance;
      if (w.observable == Observable::NoiseTwoTime &&
          !(std::abs(res.r.limit.imag()) <= x.imag_tolerance * std::abs(res.r.limit.real()))) {
        pass = false;
        error = "imaginary part of the limit exceeds imag_tolerance";
      }
      if (x.expected_order && !(std::abs(res.r.convergence_order - *x.expected_order) <= x.order_tolerance)) {
        pass = false;
        if (error.empty()) error = "convergence order outside expected_order +- order_tolerance";
      }
    }
    std::vector<Cell> row(points[w.scan].values.begin(), points[w.scan].values.end());
    row.insert(row.end(), {std::string(observable_name(w.observable)), w.channel, w.s, w.sp, static_cast<double>(order),
                           res.error.empty() ? res.r.gamma_ref : kNaN, res.error.empty() ? res.r.limit.real() : kNaN,
                           res.error.empty() ? res.r.limit.imag() : kNaN, res.reference, deviation, tolerance,
                           res.error.empty() ? res.r.error * std::pow(res.r.gamma_ref, order) : kNaN,
                           res.error.empty() ? res.r.convergence_order : kNaN,
                           std::string(res.error.empty() && res.r.monotone ? "true" : "false"),
                           std::string(pass ? "true" : "false"), error});
    outcome.table.add_row(std::move(row));
    ++outcome.total;
    if (pass) ++outcome.passed;
  }
  return outcome;
}

}  // namespace

CrosscheckOutcome run_crosscheck(const SweepConfig& c, int workers) {
  if (c.mode != RunMode::Crosscheck) throw ConfigError("mode", "run_crosscheck needs mode \"crosscheck\"");
  const std::vector<ScanPoint> points = scan_points(c);
  CrosscheckOutcome outcome;
  if (c.crosscheck.suite == Suite::WeakCoupling) {
    outcome = run_weak_coupling(c, points, workers);
    outcome.table.metadata() = base_metadata(c);
    outcome.table.metadata()["extrapolation"] =
        "Neville polynomial in Gamma at fixed Gamma (t - t0); error_bar is the change when the largest Gamma is "
        "dropped; limits are multiplied back by gamma_ref^order_k; DQD rows extrapolate HE - ME and add ME at "
        "gamma_ref";
  } else {
    const CrosscheckSpec& x = c.crosscheck;
    std::vector<double> times = x.scaled_times;
    const std::vector<double> extra = random_times(c.seed, x.random_points, x.scaled_times);
    times.insert(times.end(), extra.begin(), extra.end());
    std::vector<ReportObservable> obs;
    for (Observable o : x.observables)
      obs.push_back(o == Observable::CurrentParticle ? ReportObservable::CurrentParticle
                                                     : ReportObservable::CurrentEnergy);
    std::vector<std::string> columns = scan_columns(c);
    std::vector<CurveTable> parts;
    for (const ScanPoint& p : points) parts.push_back(framework_report(p.single, obs, times, x.report, c.quadrature, workers));
    const auto& report_columns = parts.front().columns();
    columns.insert(columns.end(), report_columns.begin(), report_columns.end());
    outcome.table = CurveTable(std::move(columns));
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t r = 0; r < parts[i].rows().size(); ++r) {
        std::vector<Cell> row(points[i].values.begin(), points[i].values.end());
        row.insert(row.end(), parts[i].rows()[r].begin(), parts[i].rows()[r].end());
        outcome.table.add_row(std::move(row));
        ++outcome.total;
        if (parts[i].text(r, "pass") == "true") ++outcome.passed;
      }
    outcome.table.metadata() = base_metadata(c);
  }
  outcome.table.metadata()["summary"] = {{"passed", outcome.passed}, {"total", outcome.total}};
  return outcome;
}

void write_table(const CurveTable& t, const std::string& format, std::ostream& os) {
  if (format == "json")
    t.write_json(os);
  else
    t.write_csv(os);
}

}  // namespace qt
