#include "qtransport/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<Framework, const char*> kFrameworks[] = {
    {Framework::He, "he"}, {Framework::Me, "me"}, {Framework::Lb, "lb"}, {Framework::Fcs, "fcs"}};

constexpr std::pair<Observable, const char*> kObservables[] = {
    {Observable::CurrentParticle, "current_particle"}, {Observable::CurrentEnergy, "current_energy"},
    {Observable::NoiseTwoTime, "noise_two_time"},      {Observable::NoiseFrequency, "noise_frequency"},
    {Observable::Population, "population"},            {Observable::Activity, "activity"},
    {Observable::ContactCurrent, "contact_current"},   {Observable::ShotNoise, "shot_noise"}};

const char* kAbsoluteScan[] = {"epsilon_d", "n_d",   "g",           "n1",        "n2",    "t0",    "temperature",
                               "temperature_L", "temperature_R", "mu_L", "mu_R", "gamma_L", "gamma_R", "gamma"};
const char* kRelativeScan[] = {"epsilon_d_over_gamma", "temperature_over_gamma", "gamma_over_temperature",
                               "bias_over_gamma"};

// Object view that remembers which keys were read so leftovers can be
// reported as unknown fields.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key), "is required");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(field(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "must be an integer");
    return v.get<long long>();
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(field(key), "must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(field(key), "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "must be a number");
      out.push_back(v[i].get<double>());
      if (!std::isfinite(out.back())) throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "must be finite");
    }
    return out;
  }

  std::vector<std::pair<double, double>> pairs(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(field(key), "must be an array of [t, t'] pairs");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string f = field(key) + "[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number())
        throw ConfigError(f, "must be a pair of numbers");
      out.emplace_back(v[i][0].get<double>(), v[i][1].get<double>());
      if (!std::isfinite(out.back().first) || !std::isfinite(out.back().second)) throw ConfigError(f, "must be finite");
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Framework parse_framework(const json& v, const std::string& field) {
  if (v.is_string())
    for (const auto& [f, name] : kFrameworks)
      if (v.get<std::string>() == name) return f;
  throw ConfigError(field, "unknown framework (expected he, me, lb or fcs)");
}

Observable parse_observable(const json& v, const std::string& field) {
  if (v.is_string())
    for (const auto& [o, name] : kObservables)
      if (v.get<std::string>() == name) return o;
  throw ConfigError(field, "unknown observable");
}

Lead parse_lead_field(const json& v, const std::string& field) {
  if (v.is_string()) {
    if (v.get<std::string>() == "L") return Lead::L;
    if (v.get<std::string>() == "R") return Lead::R;
  }
  throw ConfigError(field, "lead must be \"L\" or \"R\"");
}

std::string model_field(const InvalidModel& e) {
  return e.field().rfind("model.", 0) == 0 ? e.field() : "model." + e.field();
}

void parse_reservoirs(Node& n, std::array<Reservoir, 2>& out) {
  const json& arr = n.at("reservoirs");
  if (!arr.is_array() || arr.size() != 2) throw ConfigError(n.field("reservoirs"), "must hold exactly two reservoirs");
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < 2; ++i) {
    Node r(arr[i], n.field("reservoirs") + "[" + std::to_string(i) + "]");
    Reservoir res;
    res.label = parse_lead_field(r.at("label"), r.field("label"));
    res.temperature = r.number("temperature");
    res.mu = r.number("mu");
    res.gamma = r.number("gamma");
    r.finish();
    if (seen[index(res.label)]) throw ConfigError(r.field("label"), "duplicate lead label");
    seen[index(res.label)] = true;
    out[static_cast<std::size_t>(index(res.label))] = res;
  }
}

void parse_model(Node& root, SweepConfig& c) {
  Node n(root.at("model"), "model");
  const std::string type = n.text("type", "single_dot");
  if (type == "single_dot") {
    c.model_kind = ModelKind::SingleDot;
    c.single.epsilon_d = n.number("epsilon_d");
    c.single.n_d = n.number("n_d", 0.0);
    c.single.t0 = n.number("t0", 0.0);
    parse_reservoirs(n, c.single.reservoirs);
  } else if (type == "dqd") {
    c.model_kind = ModelKind::Dqd;
    c.dqd.epsilon_d = n.number("epsilon_d");
    c.dqd.g = n.number("g");
    c.dqd.n1 = n.number("n1", 0.0);
    c.dqd.n2 = n.number("n2", 0.0);
    c.dqd.t0 = n.number("t0", 0.0);
    const std::string conf = n.text("configuration");
    if (conf == "Parallel")
      c.dqd.configuration = DqdConfiguration::Parallel;
    else if (conf == "Series")
      c.dqd.configuration = DqdConfiguration::Series;
    else
      throw ConfigError(n.field("configuration"), "must be \"Parallel\" or \"Series\"");
    c.global_rate_factor = n.number("global_rate_factor", 2.0);
    if (!(c.global_rate_factor > 0.0)) throw ConfigError(n.field("global_rate_factor"), "must be > 0");
    parse_reservoirs(n, c.dqd.reservoirs);
  } else {
    throw ConfigError(n.field("type"), "must be \"single_dot\" or \"dqd\"");
  }
  n.finish();
  try {
    if (c.model_kind == ModelKind::SingleDot)
      c.single.validate();
    else
      c.dqd.validate();
  } catch (const InvalidModel& e) {
    throw ConfigError(model_field(e), e.what());
  }
}

GridKind grid_kind_for(Observable o) {
  switch (o) {
    case Observable::NoiseTwoTime:
      return GridKind::TimePairs;
    case Observable::NoiseFrequency:
      return GridKind::Frequencies;
    case Observable::ShotNoise:
      return GridKind::None;
    default:
      return GridKind::Times;
  }
}

bool pair_observable(Observable o) {
  return o == Observable::NoiseTwoTime || o == Observable::NoiseFrequency || o == Observable::ShotNoise;
}

void parse_grid(Node& root, SweepConfig& c) {
  const GridKind want = grid_kind_for(c.observable);
  if (want == GridKind::None) {
    if (root.has("grid")) throw ConfigError("grid", std::string(observable_name(c.observable)) + " takes no grid");
    return;
  }
  Node g(root.at("grid"), "grid");
  GridSpec& out = c.grid;
  out.kind = want;
  const auto take = [&](const char* absolute, const char* scaled) -> bool {
    const bool a = g.has(absolute), s = scaled && g.has(scaled);
    if (a && s) throw ConfigError(g.field(absolute), std::string("give either ") + absolute + " or " + scaled);
    if (!a && !s) return false;
    out.scaled = s;
    return true;
  };
  if (want == GridKind::Times) {
    if (!take("times", "scaled_times"))
      throw ConfigError("grid", std::string(observable_name(c.observable)) + " needs grid.times or grid.scaled_times");
    out.values = g.numbers(out.scaled ? "scaled_times" : "times");
  } else if (want == GridKind::TimePairs) {
    if (!take("time_pairs", "scaled_time_pairs"))
      throw ConfigError("grid", "noise_two_time needs grid.time_pairs or grid.scaled_time_pairs");
    out.pairs = g.pairs(out.scaled ? "scaled_time_pairs" : "time_pairs");
  } else {
    if (!take("frequencies", nullptr)) throw ConfigError("grid", "noise_frequency needs grid.frequencies");
    out.values = g.numbers("frequencies");
  }
  if (out.values.empty() && out.pairs.empty()) throw ConfigError("grid", "is empty");
  g.finish();
}

void parse_scan(Node& root, SweepConfig& c) {
  if (!root.has("scan")) return;
  const json& arr = root.at("scan");
  if (!arr.is_array()) throw ConfigError("scan", "must be an array of {parameter, values}");
  std::set<std::string> used;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Node s(arr[i], "scan[" + std::to_string(i) + "]");
    ScanAxis axis;
    axis.parameter = s.text("parameter");
    const bool known = std::any_of(std::begin(kAbsoluteScan), std::end(kAbsoluteScan),
                                   [&](const char* p) { return axis.parameter == p; }) ||
                       is_relative_scan_parameter(axis.parameter);
    if (!known) throw ConfigError(s.field("parameter"), "unknown scan parameter '" + axis.parameter + "'");
    if (!used.insert(axis.parameter).second) throw ConfigError(s.field("parameter"), "scanned twice");
    axis.values = s.numbers("values");
    if (axis.values.empty()) throw ConfigError(s.field("values"), "is empty");
    s.finish();
    c.scan.push_back(std::move(axis));
  }
}

void parse_tolerances(Node& root, SweepConfig& c) {
  if (!root.has("tolerances")) return;
  Node t(root.at("tolerances"), "tolerances");
  QuadratureSpec& q = c.quadrature;
  q.abs_tol = t.number("abs_tol", q.abs_tol);
  q.rel_tol = t.number("rel_tol", q.rel_tol);
  q.max_subdivisions = static_cast<int>(t.integer("max_subdivisions", q.max_subdivisions));
  q.window_halfwidth = t.number("window_halfwidth", q.window_halfwidth);
  t.finish();
  if (!(q.abs_tol > 0.0)) throw ConfigError("tolerances.abs_tol", "must be > 0");
  if (!(q.rel_tol > 0.0)) throw ConfigError("tolerances.rel_tol", "must be > 0");
  if (q.max_subdivisions < 1) throw ConfigError("tolerances.max_subdivisions", "must be >= 1");
  if (!(q.window_halfwidth > 0.0)) throw ConfigError("tolerances.window_halfwidth", "must be > 0");
}

void parse_output(Node& root, SweepConfig& c) {
  if (!root.has("output")) return;
  Node o(root.at("output"), "output");
  c.output_path = o.text("path", "");
  c.output_format = o.text("format", "csv");
  if (c.output_format != "csv" && c.output_format != "json")
    throw ConfigError("output.format", "must be \"csv\" or \"json\"");
  o.finish();
}

void parse_leads(Node& root, SweepConfig& c) {
  if (c.model_kind == ModelKind::Dqd) {
    if (root.has("leads")) throw ConfigError("leads", "double-dot populations take no leads; use dots");
    if (root.has("dots")) {
      const json& d = root.at("dots");
      if (!d.is_array() || d.empty()) throw ConfigError("dots", "must be a non-empty array of 1 or 2");
      c.dots.clear();
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].is_number_integer() || (d[i].get<int>() != 1 && d[i].get<int>() != 2))
          throw ConfigError("dots[" + std::to_string(i) + "]", "must be 1 or 2");
        c.dots.push_back(d[i].get<int>());
      }
    }
    return;
  }
  if (root.has("dots")) throw ConfigError("dots", "only double-dot models take dots");
  if (pair_observable(c.observable)) {
    c.lead_pairs = {{Lead::L, Lead::L}, {Lead::L, Lead::R}, {Lead::R, Lead::L}, {Lead::R, Lead::R}};
    if (root.has("leads")) {
      const json& arr = root.at("leads");
      if (!arr.is_array() || arr.empty()) throw ConfigError("leads", "must be a non-empty array of lead pairs");
      c.lead_pairs.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string f = "leads[" + std::to_string(i) + "]";
        if (!arr[i].is_array() || arr[i].size() != 2) throw ConfigError(f, "must be a pair like [\"L\", \"R\"]");
        c.lead_pairs.emplace_back(parse_lead_field(arr[i][0], f), parse_lead_field(arr[i][1], f));
      }
    }
  } else if (c.observable != Observable::Population && root.has("leads")) {
    const json& arr = root.at("leads");
    if (!arr.is_array() || arr.empty()) throw ConfigError("leads", "must be a non-empty array of \"L\" / \"R\"");
    c.leads.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.leads.push_back(parse_lead_field(arr[i], "leads[" + std::to_string(i) + "]"));
  } else if (root.has("leads")) {
    throw ConfigError("leads", "population takes no leads");
  }
}

std::vector<Observable> parse_observable_list(Node& n, const std::string& key) {
  const json& arr = n.at(key);
  if (!arr.is_array() || arr.empty()) throw ConfigError(n.field(key), "must be a non-empty array");
  std::vector<Observable> out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_observable(arr[i], n.field(key) + "[" + std::to_string(i) + "]"));
  return out;
}

void parse_crosscheck(Node& root, SweepConfig& c) {
  Node n(root.at("crosscheck"), "crosscheck");
  CrosscheckSpec& x = c.crosscheck;
  const std::string suite = n.text("suite");
  if (suite == "framework")
    x.suite = Suite::Framework;
  else if (suite == "weak_coupling")
    x.suite = Suite::WeakCoupling;
  else
    throw ConfigError(n.field("suite"), "must be \"framework\" or \"weak_coupling\"");
  x.observables = parse_observable_list(n, "observables");
  if (n.has("scaled_times")) x.scaled_times = n.numbers("scaled_times");
  if (n.has("scaled_time_pairs")) x.scaled_time_pairs = n.pairs("scaled_time_pairs");
  x.random_points = static_cast<int>(n.integer("random_points", 0));
  if (x.random_points < 0) throw ConfigError(n.field("random_points"), "must be >= 0");
  for (double s : x.scaled_times)
    if (!(s > 0.0)) throw ConfigError(n.field("scaled_times"), "entries must be > 0");

  if (x.suite == Suite::Framework) {
    if (c.model_kind != ModelKind::SingleDot) throw ConfigError("crosscheck.suite", "framework suite needs a single_dot model");
    for (std::size_t i = 0; i < x.observables.size(); ++i)
      if (x.observables[i] != Observable::CurrentParticle && x.observables[i] != Observable::CurrentEnergy)
        throw ConfigError(n.field("observables") + "[" + std::to_string(i) + "]",
                          "framework suite compares current_particle and current_energy");
    x.report.steady_relative = n.number("steady_relative", x.report.steady_relative);
    x.report.transient_fraction = n.number("transient_fraction", x.report.transient_fraction);
    if (!(x.report.steady_relative > 0.0)) throw ConfigError(n.field("steady_relative"), "must be > 0");
    if (!(x.report.transient_fraction > 0.0)) throw ConfigError(n.field("transient_fraction"), "must be > 0");
  } else {
    if (n.has("gamma_sequence")) x.gamma_sequence = n.numbers("gamma_sequence");
    x.relative_tolerance = n.number("relative_tolerance", x.relative_tolerance);
    x.imag_tolerance = n.number("imag_tolerance", x.imag_tolerance);
    if (n.has("expected_order")) x.expected_order = n.number("expected_order");
    x.order_tolerance = n.number("order_tolerance", x.order_tolerance);
    if (n.has("eta_ratio")) x.eta_ratio = n.number("eta_ratio");
    WeakCouplingPlan plan;
    plan.gamma_sequence = x.gamma_sequence;
    plan.eta_ratio = x.eta_ratio;
    try {
      plan.validate();
    } catch (const InvalidModel& e) {
      throw ConfigError("crosscheck." + e.field(), e.what());
    }
    if (!(x.relative_tolerance > 0.0)) throw ConfigError(n.field("relative_tolerance"), "must be > 0");
    for (std::size_t i = 0; i < x.observables.size(); ++i) {
      const Observable o = x.observables[i];
      const bool ok = c.model_kind == ModelKind::Dqd
                          ? o == Observable::Population
                          : (o == Observable::CurrentParticle || o == Observable::CurrentEnergy ||
                             o == Observable::NoiseTwoTime || o == Observable::ShotNoise || o == Observable::Population);
      if (!ok)
        throw ConfigError(n.field("observables") + "[" + std::to_string(i) + "]",
                          std::string(observable_name(o)) + " has no weak-coupling reference for this model");
      if (o == Observable::NoiseTwoTime && x.scaled_time_pairs.empty())
        throw ConfigError(n.field("scaled_time_pairs"), "noise_two_time needs scaled_time_pairs");
    }
    for (const auto& [s, sp] : x.scaled_time_pairs)
      if (!(s > 0.0) || !(sp > 0.0) || s == sp)
        throw ConfigError(n.field("scaled_time_pairs"), "entries must be positive with t != t'");
    if (c.model_kind == ModelKind::Dqd && c.dqd.configuration == DqdConfiguration::Series && !x.eta_ratio)
      throw ConfigError(n.field("eta_ratio"), "Series weak-coupling limit needs eta_ratio");
  }
  n.finish();
}

void write_reservoirs(ordered_json& j, const std::array<Reservoir, 2>& r) {
  ordered_json arr = ordered_json::array();
  for (const Reservoir& res : r)
    arr.push_back({{"label", lead_name(res.label)}, {"temperature", res.temperature}, {"mu", res.mu}, {"gamma", res.gamma}});
  j["reservoirs"] = std::move(arr);
}

ordered_json pairs_json(const std::vector<std::pair<double, double>>& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& [a, b] : p) arr.push_back({a, b});
  return arr;
}

}  // namespace

const char* framework_name(Framework f) {
  for (const auto& [k, name] : kFrameworks)
    if (k == f) return name;
  return "?";
}

const char* observable_name(Observable o) {
  for (const auto& [k, name] : kObservables)
    if (k == o) return name;
  return "?";
}

bool supports(Framework f, Observable o, ModelKind kind) {
  if (kind == ModelKind::Dqd) return o == Observable::Population && f != Framework::Lb;
  switch (f) {
    case Framework::He:
      return o != Observable::Activity;
    case Framework::Me:
      return o != Observable::NoiseFrequency && o != Observable::ContactCurrent;
    case Framework::Lb:
      return o == Observable::CurrentParticle || o == Observable::CurrentEnergy || o == Observable::ShotNoise;
    case Framework::Fcs:
      return o == Observable::CurrentParticle || o == Observable::CurrentEnergy || o == Observable::NoiseTwoTime ||
             o == Observable::Population || o == Observable::Activity;
  }
  return false;
}

bool is_relative_scan_parameter(const std::string& parameter) {
  return std::any_of(std::begin(kRelativeScan), std::end(kRelativeScan),
                     [&](const char* p) { return parameter == p; });
}

namespace {

template <class Model>
void apply_common(Model& m, const std::string& p, double v) {
  const double gamma = m.gamma();
  if (p == "epsilon_d") m.epsilon_d = v;
  else if (p == "t0") m.t0 = v;
  else if (p == "temperature") m.reservoirs[0].temperature = m.reservoirs[1].temperature = v;
  else if (p == "temperature_L") m.reservoirs[0].temperature = v;
  else if (p == "temperature_R") m.reservoirs[1].temperature = v;
  else if (p == "mu_L") m.reservoirs[0].mu = v;
  else if (p == "mu_R") m.reservoirs[1].mu = v;
  else if (p == "gamma_L") m.reservoirs[0].gamma = v;
  else if (p == "gamma_R") m.reservoirs[1].gamma = v;
  else if (p == "gamma") {
    for (auto& r : m.reservoirs) r.gamma *= v / gamma;
  } else if (p == "epsilon_d_over_gamma") m.epsilon_d = v * gamma;
  else if (p == "temperature_over_gamma") m.reservoirs[0].temperature = m.reservoirs[1].temperature = v * gamma;
  else if (p == "gamma_over_temperature") {
    if (v == 0.0) throw ConfigError("scan", "gamma_over_temperature must be nonzero");
    m.reservoirs[0].temperature = m.reservoirs[1].temperature = gamma / v;
  } else if (p == "bias_over_gamma") {
    m.reservoirs[0].mu = 0.5 * v * gamma;
    m.reservoirs[1].mu = -0.5 * v * gamma;
  } else
    throw ConfigError("scan", "parameter '" + p + "' does not apply to this model");
}

}  // namespace

void apply_scan_parameter(SingleDotModel& m, const std::string& parameter, double value) {
  if (parameter == "n_d")
    m.n_d = value;
  else
    apply_common(m, parameter, value);
}

void apply_scan_parameter(DqdModel& m, const std::string& parameter, double value) {
  if (parameter == "g")
    m.g = value;
  else if (parameter == "n1")
    m.n1 = value;
  else if (parameter == "n2")
    m.n2 = value;
  else
    apply_common(m, parameter, value);
}

SweepConfig parse_config(const json& doc) {
  SweepConfig c;
  Node root(doc, "");
  const std::string mode = root.text("mode", "sweep");
  if (mode == "sweep")
    c.mode = RunMode::Sweep;
  else if (mode == "crosscheck")
    c.mode = RunMode::Crosscheck;
  else
    throw ConfigError("mode", "must be \"sweep\" or \"crosscheck\"");
  parse_model(root, c);

  const long long seed = root.integer("seed", 0);
  if (seed < 0) throw ConfigError("seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);

  if (c.mode == RunMode::Sweep) {
    c.observable = parse_observable(root.at("observable"), "observable");
    if (c.model_kind == ModelKind::Dqd && c.observable != Observable::Population)
      throw ConfigError("observable", "double-dot models only provide population");
    if (root.has("framework") == root.has("frameworks"))
      throw ConfigError("frameworks", "give exactly one of framework or frameworks");
    if (root.has("framework")) {
      c.frameworks = {parse_framework(root.at("framework"), "framework")};
    } else {
      const json& arr = root.at("frameworks");
      if (!arr.is_array() || arr.empty()) throw ConfigError("frameworks", "must be a non-empty array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const Framework f = parse_framework(arr[i], "frameworks[" + std::to_string(i) + "]");
        if (std::find(c.frameworks.begin(), c.frameworks.end(), f) != c.frameworks.end())
          throw ConfigError("frameworks[" + std::to_string(i) + "]", "listed twice");
        c.frameworks.push_back(f);
      }
    }
    for (Framework f : c.frameworks)
      if (!supports(f, c.observable, c.model_kind))
        throw ConfigError("frameworks", std::string(framework_name(f)) + " does not provide " +
                                            observable_name(c.observable) + " for this model");
    parse_leads(root, c);
    parse_grid(root, c);
  } else {
    parse_crosscheck(root, c);
  }
  parse_scan(root, c);
  parse_tolerances(root, c);
  parse_output(root, c);
  root.finish();
  return c;
}

SweepConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ordered_json config_to_json(const SweepConfig& c) {
  ordered_json j;
  j["mode"] = c.mode == RunMode::Sweep ? "sweep" : "crosscheck";
  ordered_json m;
  if (c.model_kind == ModelKind::SingleDot) {
    m["type"] = "single_dot";
    m["epsilon_d"] = c.single.epsilon_d;
    m["n_d"] = c.single.n_d;
    m["t0"] = c.single.t0;
    write_reservoirs(m, c.single.reservoirs);
  } else {
    m["type"] = "dqd";
    m["epsilon_d"] = c.dqd.epsilon_d;
    m["g"] = c.dqd.g;
    m["n1"] = c.dqd.n1;
    m["n2"] = c.dqd.n2;
    m["t0"] = c.dqd.t0;
    m["configuration"] = c.dqd.configuration == DqdConfiguration::Parallel ? "Parallel" : "Series";
    m["global_rate_factor"] = c.global_rate_factor;
    write_reservoirs(m, c.dqd.reservoirs);
  }
  j["model"] = std::move(m);
  j["seed"] = c.seed;

  if (c.mode == RunMode::Sweep) {
    j["observable"] = observable_name(c.observable);
    ordered_json fw = ordered_json::array();
    for (Framework f : c.frameworks) fw.push_back(framework_name(f));
    j["frameworks"] = std::move(fw);
    if (c.model_kind == ModelKind::Dqd) {
      j["dots"] = c.dots;
    } else if (pair_observable(c.observable)) {
      ordered_json lp = ordered_json::array();
      for (const auto& [a, b] : c.lead_pairs) lp.push_back({lead_name(a), lead_name(b)});
      j["leads"] = std::move(lp);
    } else if (c.observable != Observable::Population) {
      ordered_json l = ordered_json::array();
      for (Lead a : c.leads) l.push_back(lead_name(a));
      j["leads"] = std::move(l);
    }
    if (c.grid.kind == GridKind::Times)
      j["grid"] = {{c.grid.scaled ? "scaled_times" : "times", c.grid.values}};
    else if (c.grid.kind == GridKind::TimePairs)
      j["grid"] = {{c.grid.scaled ? "scaled_time_pairs" : "time_pairs", pairs_json(c.grid.pairs)}};
    else if (c.grid.kind == GridKind::Frequencies)
      j["grid"] = {{"frequencies", c.grid.values}};
  } else {
    const CrosscheckSpec& x = c.crosscheck;
    ordered_json cc;
    cc["suite"] = x.suite == Suite::Framework ? "framework" : "weak_coupling";
    ordered_json obs = ordered_json::array();
    for (Observable o : x.observables) obs.push_back(observable_name(o));
    cc["observables"] = std::move(obs);
    cc["scaled_times"] = x.scaled_times;
    cc["scaled_time_pairs"] = pairs_json(x.scaled_time_pairs);
    cc["random_points"] = x.random_points;
    if (x.suite == Suite::Framework) {
      cc["steady_relative"] = x.report.steady_relative;
      cc["transient_fraction"] = x.report.transient_fraction;
    } else {
      cc["gamma_sequence"] = x.gamma_sequence;
      cc["relative_tolerance"] = x.relative_tolerance;
      cc["imag_tolerance"] = x.imag_tolerance;
      cc["expected_order"] = x.expected_order ? ordered_json(*x.expected_order) : ordered_json(nullptr);
      cc["order_tolerance"] = x.order_tolerance;
      cc["eta_ratio"] = x.eta_ratio ? ordered_json(*x.eta_ratio) : ordered_json(nullptr);
    }
    j["crosscheck"] = std::move(cc);
  }

  ordered_json scan = ordered_json::array();
  for (const ScanAxis& a : c.scan) scan.push_back({{"parameter", a.parameter}, {"values", a.values}});
  j["scan"] = std::move(scan);
  j["tolerances"] = {{"abs_tol", c.quadrature.abs_tol},
                     {"rel_tol", c.quadrature.rel_tol},
                     {"max_subdivisions", c.quadrature.max_subdivisions},
                     {"window_halfwidth", c.quadrature.window_halfwidth}};
  j["output"] = {{"format", c.output_format}};
  return j;
}

}  // namespace qt
