#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qtransport/crosscheck.hpp"
#include "qtransport/model.hpp"
#include "qtransport/numerics.hpp"

namespace qt {

inline constexpr const char* kSoftwareName = "qtransport";
inline constexpr const char* kSoftwareVersion = "1.0.0";

// Schema violation; field() is the JSON path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Framework { He, Me, Lb, Fcs };
enum class Observable {
  CurrentParticle,
  CurrentEnergy,
  NoiseTwoTime,
  NoiseFrequency,
  Population,
  Activity,
  ContactCurrent,
  ShotNoise
};
enum class ModelKind { SingleDot, Dqd };
enum class RunMode { Sweep, Crosscheck };
enum class GridKind { None, Times, TimePairs, Frequencies };
enum class Suite { Framework, WeakCoupling };

const char* framework_name(Framework f);
const char* observable_name(Observable o);

// Whether `f` provides `o` for the given model kind.
bool supports(Framework f, Observable o, ModelKind kind);

struct GridSpec {
  GridKind kind = GridKind::None;
  bool scaled = false;  // values are Gamma (t - t0); frequencies are never scaled
  std::vector<double> values;
  std::vector<std::pair<double, double>> pairs;
};

// One axis of a Cartesian parameter scan, first axis outermost.
struct ScanAxis {
  std::string parameter;
  std::vector<double> values;
};

struct CrosscheckSpec {
  Suite suite = Suite::Framework;
  std::vector<Observable> observables;
  std::vector<double> scaled_times;
  std::vector<std::pair<double, double>> scaled_time_pairs;
  int random_points = 0;
  ReportTolerances report;
  std::vector<double> gamma_sequence{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double relative_tolerance = 1e-3;
  double imag_tolerance = 1e-3;  // |Im| <= imag_tolerance * |Re| for noise limits
  std::optional<double> expected_order;
  double order_tolerance = 0.3;
  std::optional<double> eta_ratio;
};

struct SweepConfig {
  RunMode mode = RunMode::Sweep;
  ModelKind model_kind = ModelKind::SingleDot;
  SingleDotModel single;
  DqdModel dqd;
  double global_rate_factor = 2.0;

  std::vector<Framework> frameworks;
  Observable observable = Observable::CurrentParticle;
  std::vector<Lead> leads{Lead::L, Lead::R};
  std::vector<std::pair<Lead, Lead>> lead_pairs;
  std::vector<int> dots{1, 2};
  GridSpec grid;
  std::vector<ScanAxis> scan;
  QuadratureSpec quadrature;
  CrosscheckSpec crosscheck;

  std::string output_path;
  std::string output_format = "csv";
  std::uint64_t seed = 0;
};

// Throws ConfigError (or InvalidModel for physical constraints).
SweepConfig parse_config(const nlohmann::json& doc);
SweepConfig parse_config_text(const std::string& text);

// Effective configuration with defaults filled in. The output path is left
// out so that the emitted metadata does not depend on where it is written.
nlohmann::ordered_json config_to_json(const SweepConfig& c);

// Applies one scan parameter to a copy of the model. Parameters ending in
// "_over_gamma" / "_over_temperature" are relative to the current model.
void apply_scan_parameter(SingleDotModel& m, const std::string& parameter, double value);
void apply_scan_parameter(DqdModel& m, const std::string& parameter, double value);
bool is_relative_scan_parameter(const std::string& parameter);

}  // namespace qt
