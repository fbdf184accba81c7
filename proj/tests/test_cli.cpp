#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qtransport/config.hpp"
#include "qtransport/lb.hpp"
#include "qtransport/sweep.hpp"
#include "qtransport/table.hpp"

using namespace qt;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("qt_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

RunResult run_cli(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt", err = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(QT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

const char* kReservoirs = R"("reservoirs": [
      {"label": "L", "temperature": 0.5, "mu": 0.5, "gamma": 0.5},
      {"label": "R", "temperature": 0.5, "mu": -0.5, "gamma": 0.5}])";

std::string single_dot_config(const std::string& body) {
  return std::string(R"({"model": {"type": "single_dot", "epsilon_d": 0.2, )") + kReservoirs + "}, " + body + "}";
}

}  // namespace

TEST_CASE("framework / observable compatibility table") {
  CHECK(supports(Framework::He, Observable::NoiseTwoTime, ModelKind::SingleDot));
  CHECK_FALSE(supports(Framework::Lb, Observable::NoiseTwoTime, ModelKind::SingleDot));
  CHECK_FALSE(supports(Framework::Lb, Observable::Population, ModelKind::SingleDot));
  CHECK(supports(Framework::Lb, Observable::ShotNoise, ModelKind::SingleDot));
  CHECK_FALSE(supports(Framework::Me, Observable::ContactCurrent, ModelKind::SingleDot));
  CHECK(supports(Framework::Fcs, Observable::Population, ModelKind::Dqd));
  CHECK_FALSE(supports(Framework::He, Observable::CurrentParticle, ModelKind::Dqd));
}

TEST_CASE("config parsing names the offending field") {
  const auto field_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  CHECK(field_of(single_dot_config(R"("observable": "current_particle", "framework": "he", "grid": {"times": [1]})")) ==
        "<accepted>");
  CHECK(field_of(single_dot_config(R"("observable": "noise_two_time", "framework": "lb",
                                     "grid": {"time_pairs": [[1, 2]]})")) == "frameworks");
  CHECK(field_of(single_dot_config(R"("observable": "current_particle", "framework": "he", "grid": {"times": [1]},
                                     "colour": 1)")) == "colour");
  CHECK(field_of(single_dot_config(R"("observable": "current_particle", "framework": "he", "grid": {"tmes": [1]})")) ==
        "grid");
  CHECK(field_of(single_dot_config(R"("observable": "current_parti", "framework": "he", "grid": {"times": [1]})")) ==
        "observable");
  CHECK(field_of(R"({"model": {"type": "single_dot", "epsilon_d": 0,
        "reservoirs": [{"label": "L", "temperature": 1, "mu": 0, "gamma": 1},
                       {"label": "R", "temperature": 1, "mu": 0}]},
        "observable": "population", "framework": "me", "grid": {"times": [1]}})") == "model.reservoirs[1].gamma");
  CHECK(field_of(R"({"model": {"type": "dqd", "configuration": "Series", "epsilon_d": 0, "g": 0.5,
        "reservoirs": [{"label": "L", "temperature": 1, "mu": 0, "gamma": 1},
                       {"label": "R", "temperature": 1, "mu": 0, "gamma": 0.5}]},
        "observable": "population", "framework": "he", "grid": {"times": [1]}})") == "model.g");
  CHECK(field_of(single_dot_config(R"("observable": "current_particle", "framework": "he", "grid": {"times": [1]},
                                     "scan": [{"parameter": "spin", "values": [1]}])")) == "scan[0].parameter");
  CHECK(field_of(single_dot_config(R"("mode": "crosscheck", "crosscheck": {"suite": "weak_coupling",
        "observables": ["current_particle"], "gamma_sequence": [0.1, 0.2]})")) == "crosscheck.gamma_sequence");
  CHECK(field_of("{not json") == "<document>");
}

TEST_CASE("effective config round-trips through the metadata header") {
  const std::string text = R"({"model": {"type": "dqd", "configuration": "Parallel", "epsilon_d": 0.1, "g": 0.3,
      "n1": 0.5, "reservoirs": [{"label": "R", "temperature": 1, "mu": -0.2, "gamma": 0.4},
                                {"label": "L", "temperature": 2, "mu": 0.2, "gamma": 0.6}]},
      "observable": "population", "frameworks": ["me", "fcs"], "dots": [2],
      "grid": {"scaled_times": [0.5, 1]}, "scan": [{"parameter": "g", "values": [0.1, 0.2]}],
      "tolerances": {"rel_tol": 1e-8}, "output": {"path": "ignored.csv"}})";
  const SweepConfig c = parse_config_text(text);
  const CurveTable t = run_sweep(c, 2);
  std::ostringstream os;
  t.write_csv(os);
  std::istringstream is(os.str());
  const nlohmann::ordered_json meta = read_csv_metadata(is);
  CHECK(meta["software"] == kSoftwareName);
  CHECK(meta["version"] == kSoftwareVersion);
  const SweepConfig back = parse_config(nlohmann::json::parse(meta["config"].dump()));
  CHECK(config_to_json(back) == meta["config"]);
  CHECK(back.dqd.reservoirs[0].gamma == 0.6);
  CHECK(back.quadrature.rel_tol == 1e-8);
  CHECK_FALSE(meta["config"]["output"].contains("path"));

  CHECK(t.columns() == std::vector<std::string>{"g", "t", "t_gamma", "population_me_global_dot2",
                                                "population_fcs_global_dot2"});
  REQUIRE(t.rows().size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.number(i, "population_me_global_dot2") ==
          doctest::Approx(t.number(i, "population_fcs_global_dot2")).epsilon(1e-10));
  }

  const SweepConfig cc = parse_config_text(single_dot_config(
      R"("mode": "crosscheck", "seed": 7, "crosscheck": {"suite": "weak_coupling", "observables": ["shot_noise"],
         "expected_order": 1})"));
  const nlohmann::ordered_json j = config_to_json(cc);
  CHECK(config_to_json(parse_config(nlohmann::json::parse(j.dump()))) == j);
}

TEST_CASE("relative scan parameters apply after absolute ones") {
  const SweepConfig c = parse_config_text(single_dot_config(R"("observable": "current_particle", "framework": "lb",
      "leads": ["L"], "grid": {"times": [1]},
      "scan": [{"parameter": "bias_over_gamma", "values": [1]}, {"parameter": "gamma_L", "values": [1.5]}])"));
  const CurveTable t = run_sweep(c);
  SingleDotModel m = c.single;
  m.reservoirs[0].gamma = 1.5;
  m.reservoirs[0].mu = 1.0;
  m.reservoirs[1].mu = -1.0;
  CHECK(t.number(0, "current_particle_lb_L") == doctest::Approx(lb_current_particle(m, Lead::L)).epsilon(1e-12));
}

TEST_CASE("CLI: byte-identical output across worker counts") {
  const fs::path cfg = write_config("det.json", single_dot_config(R"("observable": "noise_two_time",
      "frameworks": ["he", "me", "fcs"], "leads": [["L", "R"], ["R", "R"]],
      "scan": [{"parameter": "epsilon_d_over_gamma", "values": [0, 1]}],
      "grid": {"scaled_time_pairs": [[1, 1.4], [2, 1.5], [0.5, 3]]})"));
  for (const char* format : {"csv", "json"}) {
    std::string first;
    for (int workers : {1, 2, 5}) {
      const fs::path out = scratch_dir() / ("det_" + std::to_string(workers) + "." + format);
      const std::string fmt = std::string(format);
      std::string text = slurp(cfg);
      const fs::path cfg_fmt = write_config("det_" + fmt + ".json",
                                            text.substr(0, text.rfind('}')) + R"(, "output": {"format": ")" + fmt + "\"}}");
      const RunResult r = run_cli("--config " + cfg_fmt.string() + " --output " + out.string() +
                                  " --workers " + std::to_string(workers));
      REQUIRE(r.code == 0);
      const std::string bytes = slurp(out);
      CHECK(!bytes.empty());
      if (first.empty())
        first = bytes;
      else
        CHECK(bytes == first);
    }
  }
}

TEST_CASE("CLI: exit codes") {
  SUBCASE("invalid framework / observable pair") {
    const fs::path cfg = write_config("bad_pair.json", single_dot_config(R"("observable": "noise_two_time",
        "framework": "lb", "grid": {"time_pairs": [[1, 2]]})"));
    const RunResult r = run_cli("--config " + cfg.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("frameworks") != std::string::npos);
  }
  SUBCASE("missing config file and bad flags") {
    CHECK(run_cli("--config /nonexistent/x.json").code == 2);
    CHECK(run_cli("--workers 2").code == 2);
    CHECK(run_cli("--config x.json --workers 0").code == 2);
  }
  SUBCASE("numerical failure names the operation and the point") {
    const fs::path cfg = write_config("equal_time.json", single_dot_config(R"("observable": "noise_two_time",
        "framework": "he", "leads": [["L", "L"]], "grid": {"time_pairs": [[1, 1]]})"));
    const RunResult r = run_cli("--config " + cfg.string());
    CHECK(r.code == 3);
    CHECK(r.err.find("he_noise_two_time[LL]") != std::string::npos);
    CHECK(r.err.find("t=1") != std::string::npos);
  }
  SUBCASE("strong coupling fails weak-coupling tolerances") {
    const fs::path cfg = write_config("strong.json", R"({"mode": "crosscheck",
        "model": {"type": "single_dot", "epsilon_d": 0,
          "reservoirs": [{"label": "L", "temperature": 1, "mu": 0.5, "gamma": 0.5},
                         {"label": "R", "temperature": 1, "mu": -0.5, "gamma": 0.5}]},
        "crosscheck": {"suite": "framework", "observables": ["current_particle"], "scaled_times": [0.5, 1, 2]}})");
    const fs::path out = scratch_dir() / "strong.csv";
    const RunResult r = run_cli("--config " + cfg.string() + " --output " + out.string());
    CHECK(r.code == 1);
    CHECK(r.out.rfind("PASS ", 0) == 0);
    CHECK(r.out != "PASS 8/8\n");
  }
  SUBCASE("weak coupling passes") {
    const fs::path cfg = write_config("weak.json", R"({"mode": "crosscheck",
        "model": {"type": "single_dot", "epsilon_d": 0,
          "reservoirs": [{"label": "L", "temperature": 1, "mu": 0.05, "gamma": 0.05},
                         {"label": "R", "temperature": 1, "mu": -0.05, "gamma": 0.05}]},
        "crosscheck": {"suite": "framework", "observables": ["current_particle"], "scaled_times": [0.5, 1, 2]}})");
    const RunResult r = run_cli("--config " + cfg.string() + " --output " + (scratch_dir() / "weak.csv").string());
    CHECK(r.code == 0);
    CHECK(r.out == "PASS 8/8\n");
  }
}

TEST_CASE("CLI: seeded random crosscheck points are reproducible") {
  const fs::path cfg = write_config("seeded.json", R"({"mode": "crosscheck",
      "model": {"type": "single_dot", "epsilon_d": 0,
        "reservoirs": [{"label": "L", "temperature": 1, "mu": 0.05, "gamma": 0.05},
                       {"label": "R", "temperature": 1, "mu": -0.05, "gamma": 0.05}]},
      "crosscheck": {"suite": "framework", "observables": ["current_particle"], "scaled_times": [0.5, 3],
                     "random_points": 3}})");
  const fs::path a = scratch_dir() / "seed_a.csv", b = scratch_dir() / "seed_b.csv", c = scratch_dir() / "seed_c.csv";
  REQUIRE(run_cli("--config " + cfg.string() + " --seed 11 --output " + a.string()).code == 0);
  REQUIRE(run_cli("--config " + cfg.string() + " --seed 11 --workers 3 --output " + b.string()).code == 0);
  REQUIRE(run_cli("--config " + cfg.string() + " --seed 12 --output " + c.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  std::ifstream in(a);
  CHECK(read_csv_metadata(in)["config"]["seed"] == 11);
}
