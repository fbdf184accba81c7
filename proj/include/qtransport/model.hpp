#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace qt {

enum class Lead { L = 0, R = 1 };

inline Lead other(Lead a) { return a == Lead::L ? Lead::R : Lead::L; }
inline int index(Lead a) { return static_cast<int>(a); }
const char* lead_name(Lead a);
Lead parse_lead(const std::string& s);

// Thrown for parameter sets that violate a model invariant. `field` names the
// offending parameter with the config spelling.
class InvalidModel : public std::invalid_argument {
 public:
  InvalidModel(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Reservoir {
  Lead label = Lead::L;
  double temperature = 1.0;
  double mu = 0.0;
  double gamma = 1.0;

  void validate() const;
};

double fermi(const Reservoir& res, double epsilon);
// Zero-temperature step occupation; only the closed-form LB path uses it.
double fermi_zero_temperature(const Reservoir& res, double epsilon);

struct SingleDotModel {
  double epsilon_d = 0.0;
  double n_d = 0.0;
  std::array<Reservoir, 2> reservoirs{Reservoir{Lead::L}, Reservoir{Lead::R}};
  double t0 = 0.0;

  const Reservoir& lead(Lead a) const { return reservoirs[static_cast<std::size_t>(index(a))]; }
  Reservoir& lead(Lead a) { return reservoirs[static_cast<std::size_t>(index(a))]; }
  double gamma() const { return reservoirs[0].gamma + reservoirs[1].gamma; }
  void validate() const;
};

enum class DqdConfiguration { Parallel, Series };

struct DqdModel {
  double epsilon_d = 0.0;
  double g = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  DqdConfiguration configuration = DqdConfiguration::Parallel;
  std::array<Reservoir, 2> reservoirs{Reservoir{Lead::L}, Reservoir{Lead::R}};
  double t0 = 0.0;

  const Reservoir& lead(Lead a) const { return reservoirs[static_cast<std::size_t>(index(a))]; }
  Reservoir& lead(Lead a) { return reservoirs[static_cast<std::size_t>(index(a))]; }
  double gamma() const { return reservoirs[0].gamma + reservoirs[1].gamma; }
  // (Gamma_L - Gamma_R) / 4
  double gamma_asym() const { return 0.25 * (reservoirs[0].gamma - reservoirs[1].gamma); }
  // sqrt(gamma_asym^2 - g^2), Series only.
  double eta() const;
  void validate() const;
};

struct Grid {
  std::vector<double> points;
  void validate(const std::string& field) const;
};

}  // namespace qt
