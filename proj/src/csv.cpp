#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "thermistor/error.hpp"
#include "thermistor/experiments.hpp"

namespace thermistor {

const char* const kTrajectoryColumns =
    "run_id,step,time,linf,l1,l2,lp_max,w1m_seminorm,energy_psi_star,dalpha_dt_l2,"
    "nonlocal_coeff,newton_iters,picard_iters,r,m";
const char* const kConstantsColumns = "name,value,formula";
const char* const kVerdictColumns = "check,parameters,lhs,rhs,margin,pass";

namespace {

// RFC 4180 quoting for free-text cells.
std::string text_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << body;
  if (!out) throw Error(ErrorCode::ConfigError, "failed writing " + path.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::ostringstream out;
  out << kTrajectoryColumns << '\n';
  for (const auto& row : rows) {
    const auto& r = row.record;
    out << row.run_id << ',' << r.step << ',' << format_number(r.time) << ','
        << format_number(r.linf) << ',' << format_number(r.l1) << ',' << format_number(r.l2)
        << ',' << format_number(r.lp_max) << ',' << format_number(r.w1m_seminorm) << ','
        << format_number(r.energy_psi_star) << ',' << format_number(r.dalpha_dt_l2) << ','
        << format_number(r.nonlocal_coeff) << ',' << r.newton_iters << ',' << r.picard_iters
        << ',' << format_number(row.r) << ',' << format_number(row.m) << '\n';
  }
  return out.str();
}

std::string constants_csv(const std::vector<ConstantRow>& rows) {
  std::ostringstream out;
  out << kConstantsColumns << '\n';
  for (const auto& row : rows)
    out << text_cell(row.name) << ',' << format_number(row.value) << ','
        << text_cell(row.formula) << '\n';
  return out.str();
}

std::string verdicts_csv(const std::vector<Verdict>& rows) {
  std::ostringstream out;
  out << kVerdictColumns << '\n';
  for (const auto& v : rows)
    out << text_cell(v.check) << ',' << text_cell(v.parameters) << ',' << format_number(v.lhs)
        << ',' << format_number(v.rhs) << ',' << format_number(v.margin()) << ','
        << (v.pass() ? "true" : "false") << '\n';
  return out.str();
}

const char* library_version() noexcept { return "1.0.0"; }

void write_artifacts(const std::filesystem::path& dir, const ScenarioResult& result,
                     const ExperimentConfig& config, const RunOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "trajectory.csv", trajectory_csv(result.trajectory));
  write_file(dir / "constants.csv", constants_csv(result.constants));
  write_file(dir / "verdicts.csv", verdicts_csv(result.verdicts));

  std::size_t failed = 0;
  for (const auto& v : result.verdicts) failed += v.pass() ? 0 : 1;
  std::ostringstream manifest;
  manifest << "; resolved configuration of one run\n"
           << "[run]\n"
           << "scenario = " << to_string(result.scenario) << '\n'
           << "version = " << library_version() << '\n'
           << "seed = " << options.seed.value_or(config.seed) << '\n'
           << "jobs = " << options.jobs << '\n'
           << "created = " << utc_timestamp() << '\n'
           << "trajectory_rows = " << result.trajectory.size() << '\n'
           << "verdicts = " << result.verdicts.size() << '\n'
           << "verdicts_failed = " << failed << "\n\n"
           << render_config(config);
  write_file(dir / "manifest.ini", manifest.str());
}

int run_scenario_to_dir(std::string_view scenario_name, const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir, const RunOptions& options,
                        std::string& message) {
  Scenario scenario{};
  ExperimentConfig config;
  try {
    scenario = parse_scenario(scenario_name);
    config = load_config(config_path);
    if (options.jobs < 1) throw Error(ErrorCode::ConfigError, "jobs must be >= 1");
  } catch (const Error& e) {
    message = e.what();
    return kExitConfig;
  }

  ScenarioResult result;
  try {
    result = run_scenario(scenario, config, options);
  } catch (const StepFailure& e) {
    std::ostringstream msg;
    msg << "step failure at s = " << e.time() << ": " << e.what();
    message = msg.str();
    return kExitSolver;
  } catch (const Error& e) {
    message = std::string(to_string(e.code())) + ": " + e.what();
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitSolver;
  }

  try {
    write_artifacts(out_dir, result, config, options);
  } catch (const Error& e) {
    message = e.what();
    return kExitConfig;
  }
  if (!result.all_pass()) {
    std::ostringstream msg;
    msg << "failed checks:";
    for (const auto& v : result.verdicts)
      if (!v.pass()) msg << ' ' << v.check << '(' << v.parameters << ')';
    message = msg.str();
    return kExitVerdictFailed;
  }
  message.clear();
  return kExitOk;
}

}  // namespace thermistor
