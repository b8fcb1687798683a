#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thermistor/error.hpp"
#include "thermistor/experiments.hpp"

using namespace thermistor;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("thermistor-tests-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits one CSV line, honouring double quotes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (ch == ',' && !quoted) {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

void check_schema(const std::string& body, const char* header) {
  std::istringstream in(body);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == header);
  const auto columns = split_csv(header).size();
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    CHECK(cells.size() == columns);
    for (const auto& c : cells) CHECK_FALSE(c.empty());
  }
}

const char* kSmall = R"(
; small m = 3 problem
[problem]
m = 3
horizon = 0.2
[domain]
cells_x = 16
[source]
family = gaussian-bump
amplitude = 1
center = 0.5
width = 0.3
[stepper]
dt = 0.01
[record]
count = 4
[ensemble]
count = 3
family = fourier
amplitude_min = 0.5
amplitude_max = 1.5
seed = 5
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(kSmall);
  CHECK(c.problem.m == 3.0);
  CHECK(c.domain.cells_x == 16);
  CHECK(c.source.family == SourceFamily::gaussian_bump);
  CHECK(c.ensemble.count == 3);
  CHECK(c.seed == 5);

  const auto again = parse_config(render_config(c));
  CHECK(render_config(again) == render_config(c));

  CHECK_THROWS_AS(parse_config("[problem]\nm = 1.5\n"), Error);
  CHECK_THROWS_AS(parse_config("[problem]\nunknown = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("[nowhere]\nm = 3\n"), Error);
  CHECK_THROWS_AS(parse_config("m = 3\n"), Error);
  CHECK_THROWS_AS(parse_config("[problem]\nm = three\n"), Error);
  CHECK_THROWS_AS(parse_config("[material]\nfamily = quartic\n"), Error);
  CHECK_THROWS_AS(parse_config("[problem]\ncurrent_I = 2\n"), Error);
  CHECK_THROWS_AS(parse_config("[problem]\nkappa = 3\ncurrent_I = 2\narea_B = 1\n"), Error);
  CHECK_NOTHROW(parse_config("[problem]\nkappa = 4\ncurrent_I = 2\narea_B = 1\n"));
  try {
    parse_config("[stepper]\ndt = -1\n");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }

  ExperimentConfig copy = c;
  set_config_value(copy, "problem", "m", "4");
  CHECK(copy.problem.m == 4.0);
  CHECK_THROWS_AS(set_config_value(copy, "problem", "m", "1"), Error);
}

TEST_CASE("scenario names") {
  for (auto s : {Scenario::simulate, Scenario::mms, Scenario::reg_sweep, Scenario::uniqueness,
                 Scenario::absorbing, Scenario::attractor, Scenario::verify})
    CHECK(parse_scenario(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scenario("bogus"), Error);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
  for (double v : {1.0 / 3.0, 2.718281828459045, 6.02e23})
    CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("csv quoting") {
  ScenarioResult r;
  r.constants.push_back({"C14", 1.5, "kappa f_max / (sigma |Omega|)^2, \"bound\""});
  const auto body = constants_csv(r.constants);
  CHECK(body.find("\"kappa f_max / (sigma |Omega|)^2, \"\"bound\"\"\"") != std::string::npos);
  check_schema(body, kConstantsColumns);
}

TEST_CASE("simulate with M = 0 records one row per run") {
  auto c = parse_config(kSmall);
  c.problem.horizon = 0.0;
  const auto r = run_scenario(Scenario::simulate, c, {});
  CHECK(r.trajectory.size() == 3);
  for (const auto& row : r.trajectory) CHECK(row.record.step == 0);
  CHECK(r.all_pass());
}

TEST_CASE("simulate artifacts are deterministic and independent of jobs") {
  const auto dir = scratch("determinism");
  const auto config = write_text(dir / "small.ini", kSmall);
  std::string message;
  RunOptions one, three;
  three.jobs = 3;
  REQUIRE(run_scenario_to_dir("simulate", config, dir / "a", one, message) == kExitOk);
  REQUIRE(run_scenario_to_dir("simulate", config, dir / "b", one, message) == kExitOk);
  REQUIRE(run_scenario_to_dir("simulate", config, dir / "c", three, message) == kExitOk);
  for (const char* name : {"trajectory.csv", "constants.csv", "verdicts.csv"}) {
    const auto a = read_text(dir / "a" / name);
    CHECK(a == read_text(dir / "b" / name));
    CHECK(a == read_text(dir / "c" / name));
  }
  check_schema(read_text(dir / "a" / "trajectory.csv"), kTrajectoryColumns);
  check_schema(read_text(dir / "a" / "constants.csv"), kConstantsColumns);
  check_schema(read_text(dir / "a" / "verdicts.csv"), kVerdictColumns);

  const auto manifest = read_text(dir / "a" / "manifest.ini");
  CHECK(manifest.find("scenario = simulate") != std::string::npos);
  CHECK(manifest.find("[stepper]") != std::string::npos);
  CHECK(manifest.find("created = ") != std::string::npos);

  RunOptions reseeded;
  reseeded.seed = 6;
  REQUIRE(run_scenario_to_dir("simulate", config, dir / "d", reseeded, message) == kExitOk);
  CHECK(read_text(dir / "a" / "trajectory.csv") != read_text(dir / "d" / "trajectory.csv"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit-codes");
  std::string message;
  CHECK(run_scenario_to_dir("simulate", dir / "missing.ini", dir / "o", {}, message) == kExitConfig);
  CHECK_FALSE(message.empty());
  const auto bad = write_text(dir / "bad.ini", "[problem]\nm = 1\n");
  CHECK(run_scenario_to_dir("simulate", bad, dir / "o", {}, message) == kExitConfig);
  const auto ok = write_text(dir / "ok.ini", kSmall);
  CHECK(run_scenario_to_dir("bogus", ok, dir / "o", {}, message) == kExitConfig);
  RunOptions zero_jobs;
  zero_jobs.jobs = 0;
  CHECK(run_scenario_to_dir("simulate", ok, dir / "o", zero_jobs, message) == kExitConfig);

  const auto stuck = write_text(dir / "stuck.ini",
                                "[problem]\nm = 3\nhorizon = 0.1\n[domain]\ncells_x = 16\n"
                                "[stepper]\ndt = 0.05\nnewton_tol = 1e-300\ndt_halving_max = 1\n");
  CHECK(run_scenario_to_dir("simulate", stuck, dir / "o", {}, message) == kExitSolver);
  CHECK(message.find("step failure") != std::string::npos);

  const auto strict = write_text(dir / "strict.ini",
                                 "[problem]\nm = 2\nhorizon = 0.2\n[mms]\nlevels = 2\n"
                                 "temporal_cells = 32\ncells_coarse = 4\nspatial_horizon = 0.01\n"
                                 "min_temporal_order = 5\n");
  CHECK(run_scenario_to_dir("mms", strict, dir / "strict", {}, message) == kExitVerdictFailed);
  CHECK(message.find("mms-temporal-order") != std::string::npos);
  CHECK(fs::exists(dir / "strict" / "verdicts.csv"));

  const auto absorbing = write_text(dir / "abs.ini", "[problem]\nm = 2\n");
  CHECK(run_scenario_to_dir("absorbing", absorbing, dir / "o", {}, message) == kExitConfig);
}

TEST_CASE("uniqueness scenario on a small grid") {
  auto c = parse_config(
      "[problem]\nm = 3\nhorizon = 0.3\nreg_r = 1e-3\n[domain]\ncells_x = 24\n"
      "[stepper]\ndt = 0.005\n[record]\ncount = 12\n");
  const auto r = run_scenario(Scenario::uniqueness, c, {});
  REQUIRE(r.verdicts.size() == 3);
  for (const auto& v : r.verdicts) CHECK_MESSAGE(v.pass(), v.check);
  CHECK(r.trajectory.size() == 3 * 13);
}

TEST_CASE("shipped configs parse") {
  const char* dir = std::getenv("THERMISTOR_CONFIG_DIR");
  if (!dir) return;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    CHECK_NOTHROW(load_config(entry.path()));
  }
}
