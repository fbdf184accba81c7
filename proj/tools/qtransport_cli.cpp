#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qtransport/config.hpp"
#include "qtransport/sweep.hpp"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-dot transport: sweeps and framework cross-checks"};
  std::string config_path, output_path;
  int workers = 1;
  long long seed = -1;
  app.add_option("--config", config_path, "JSON configuration")->required();
  app.add_option("--output", output_path, "output file (overrides output.path; '-' for stdout)");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized crosscheck points (overrides config)")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  qt::SweepConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw qt::ConfigError("--config", "cannot open " + config_path);
    std::ostringstream text;
    text << in.rdbuf();
    config = qt::parse_config_text(text.str());
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (!output_path.empty()) config.output_path = output_path;
  } catch (const qt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qt::InvalidModel& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  qt::CurveTable table;
  qt::CrosscheckOutcome outcome;
  try {
    if (config.mode == qt::RunMode::Sweep) {
      table = qt::run_sweep(config, workers);
    } else {
      outcome = qt::run_crosscheck(config, workers);
      table = std::move(outcome.table);
    }
  } catch (const qt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const qt::InvalidModel& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }

  const bool to_stdout = config.output_path.empty() || config.output_path == "-";
  if (to_stdout) {
    qt::write_table(table, config.output_format, std::cout);
  } else {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "config error: output.path: cannot write " << config.output_path << '\n';
      return kConfigError;
    }
    qt::write_table(table, config.output_format, out);
  }

  if (config.mode == qt::RunMode::Crosscheck) {
    (to_stdout ? std::cerr : std::cout) << "PASS " << outcome.passed << '/' << outcome.total
                                        << '\n';
    if (!outcome.ok()) return kCheckFailed;
  }
  return kOk;
}
