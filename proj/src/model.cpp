#include "qtransport/model.hpp"

#include <cmath>

namespace qt {

const char* lead_name(Lead a) { return a == Lead::L ? "L" : "R"; }

Lead parse_lead(const std::string& s) {
  if (s == "L") return Lead::L;
  if (s == "R") return Lead::R;
  throw InvalidModel("label", "lead label must be L or R, got '" + s + "'");
}

void Reservoir::validate() const {
  const std::string p = std::string("reservoirs[") + lead_name(label) + "].";
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw InvalidModel(p + "temperature", "must be > 0");
  if (!std::isfinite(mu)) throw InvalidModel(p + "mu", "must be finite");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidModel(p + "gamma", "must be >= 0");
}

double fermi(const Reservoir& res, double epsilon) {
  const double y = (epsilon - res.mu) / res.temperature;
  const double t = std::exp(-std::abs(y));
  return y > 0.0 ? t / (1.0 + t) : 1.0 / (1.0 + t);
}

double fermi_zero_temperature(const Reservoir& res, double epsilon) {
  if (epsilon < res.mu) return 1.0;
  if (epsilon > res.mu) return 0.0;
  return 0.5;
}

namespace {

void check_leads(const std::array<Reservoir, 2>& r) {
  if (r[0].label != Lead::L || r[1].label != Lead::R)
    throw InvalidModel("reservoirs", "need exactly one L and one R reservoir");
  r[0].validate();
  r[1].validate();
  if (!(r[0].gamma + r[1].gamma > 0.0)) throw InvalidModel("reservoirs[].gamma", "total coupling must be > 0");
}

void check_occupation(double n, const char* field) {
  if (!(n >= 0.0 && n <= 1.0)) throw InvalidModel(field, "must lie in [0, 1]");
}

}  // namespace

void SingleDotModel::validate() const {
  if (!std::isfinite(epsilon_d)) throw InvalidModel("epsilon_d", "must be finite");
  if (!std::isfinite(t0)) throw InvalidModel("t0", "must be finite");
  check_occupation(n_d, "n_d");
  check_leads(reservoirs);
}

double DqdModel::eta() const {
  const double ga = gamma_asym();
  return std::sqrt(std::max(0.0, ga * ga - g * g));
}

void DqdModel::validate() const {
  if (!std::isfinite(epsilon_d)) throw InvalidModel("epsilon_d", "must be finite");
  if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidModel("g", "must be >= 0");
  if (!std::isfinite(t0)) throw InvalidModel("t0", "must be finite");
  check_occupation(n1, "n1");
  check_occupation(n2, "n2");
  check_leads(reservoirs);
  if (configuration == DqdConfiguration::Series && g > std::abs(gamma_asym()))
    throw InvalidModel("g", "Series configuration requires g <= |Gamma_L - Gamma_R| / 4");
}

void Grid::validate(const std::string& field) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw InvalidModel(field, "grid points must be finite");
    if (i > 0 && !(points[i] > points[i - 1])) throw InvalidModel(field, "grid points must be strictly increasing");
  }
}

}  // namespace qt
