#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermistor/analysis.hpp"
#include "thermistor/problem.hpp"
#include "thermistor/solver.hpp"
#include "thermistor/suites.hpp"

namespace thermistor {

enum class Scenario { simulate, mms, reg_sweep, uniqueness, absorbing, attractor, verify };

const char* to_string(Scenario scenario) noexcept;
/// Throws Error(ConfigError) for an unknown name.
Scenario parse_scenario(std::string_view name);

/// Bounded family of initial data for an ensemble. Member k draws its
/// amplitude uniformly in [amplitude_min, amplitude_max] from its own seed.
struct EnsembleSpec {
  int count = 0;
  InitialFamily family = InitialFamily::fourier;
  double amplitude_min = 1.0;
  double amplitude_max = 1.0;
  int modes = 4;
};

struct MmsSettings {
  int levels = 4;
  double dt_coarse = 0.1;         // temporal study: dt_coarse / 2^k
  int temporal_cells = 512;
  int cells_coarse = 8;           // spatial study: cells_coarse * 2^k
  double dt_h2_factor = 0.1;      // spatial study: dt = factor * h^2
  double spatial_horizon = 0.1;
  double min_temporal_order = 0.9;
  double min_spatial_order = 1.9;
};

struct RegSweepSettings {
  std::vector<double> r_values{1e-1, 1e-2, 1e-3, 1e-4};
  double sup_tolerance = 0.05;  // relative spread of trajectory sup-norms
  double bound_slack = 0.1;     // sup-norms <= (1 + slack) * first run's
  double energy_factor = 1.5;   // time-integrated W^{1,m} energy vs first run
};

struct UniquenessSettings {
  double offset = 0.1;          // u0 = v0 + offset on the interior nodes
  double tolerance_factor = 10.0;
};

struct AbsorbingSettings {
  std::vector<double> amplitudes{1.0, 10.0, 100.0};
  double eta = 0.1;           // time at which the ball radius rho is evaluated
  double fit_fraction = 1.0;  // share of the post-transient window used to fit
};

struct AttractorSettings {
  int count = 8;
  InitialFamily family_a = InitialFamily::bump;
  double amplitude_a_min = 2.0;
  double amplitude_a_max = 5.0;
  InitialFamily family_b = InitialFamily::fourier;
  double amplitude_b_min = 0.5;
  double amplitude_b_max = 1.0;
  int modes = 4;
  double cutoff = 2.0;
  double merge_tol = 1e-6;
  double tolerance = 1e-2;
  double ratio = 10.0;
};

struct VerifySettings {
  std::size_t tartar_samples = 100000;
  std::size_t legendre_samples = 10000;
  std::size_t ghidaglia_draws = 1000;
  std::size_t gronwall_draws = 100;
  std::size_t oracle_configs = 100;
};

struct ProblemSettings {
  double m = 2.0;
  /// Either kappa directly or the pair (current_I, area_B) giving I^2/B^2;
  /// kappa defaults to 1 when neither is set.
  std::optional<double> kappa;
  std::optional<double> current_I;
  std::optional<double> area_B;
  double horizon = 1.0;
  double reg_r = 0.0;
  bool mms = false;
  double mms_amplitude = 1.0;
};

struct DomainSettings {
  int dim = 1;
  double length_x = 1.0;
  double length_y = 1.0;
  int cells_x = 64;
  int cells_y = 64;

  Grid grid() const;
};

struct MaterialSettings {
  MaterialFamily family = MaterialFamily::identity;
  double slope_low = 1.0, slope_high = 2.0, center = 0.0, width = 1.0;  // smoothed-piecewise
  double linear = 1.0, cubic = 1.0, knot = 3.0;                           // cubic-affine

  MaterialLaw law() const;
};

struct SourceSettings {
  SourceFamily family = SourceFamily::constant_floor;
  double sigma = 1.0;
  double amplitude = 1.0, center = 0.0, width = 1.0;  // gaussian-bump

  SourceLaw law() const;
};

struct InitialSettings {
  InitialFamily family = InitialFamily::sine;
  double amplitude = 1.0;
  double center = 0.5;
  double width = 0.25;
  int modes = 4;          // fourier: coefficients drawn from the run seed
  bool mollify = true;    // mollify with radius reg_r when reg_r > 0
};

struct ExperimentConfig {
  ProblemSettings problem;
  DomainSettings domain;
  MaterialSettings material;
  SourceSettings source;
  InitialSettings initial;
  StepperConfig stepper;
  int record_count = 20;
  EnsembleSpec ensemble;
  std::uint64_t seed = 1;
  MmsSettings mms;
  RegSweepSettings reg_sweep;
  UniquenessSettings uniqueness;
  AbsorbingSettings absorbing;
  AttractorSettings attractor;
  VerifySettings verify;
};

/// Parses INI text (';' comments, [section] headers, key = value). Unknown
/// sections or keys, malformed values and violated invariants throw
/// Error(ConfigError). Missing keys keep their defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one key as if it appeared in a config file, then revalidates.
/// The config is left unchanged when this throws Error(ConfigError).
void set_config_value(ExperimentConfig& config, std::string_view section, std::string_view key,
                      std::string_view value);

/// Fully resolved configuration in the same INI dialect; parse_config of the
/// result reproduces the configuration.
std::string render_config(const ExperimentConfig& config);

/// The problem actually integrated: regularised (and, unless disabled,
/// mollified) when reg_r > 0. `seed` feeds fourier initial data.
ProblemSpec effective_problem(const ExperimentConfig& config, std::uint64_t seed);

/// Initial data of ensemble member `index` drawn from `family`.
InitialData ensemble_member(const EnsembleSpec& ensemble, int dim, std::uint64_t seed, int index);

// ---------------------------------------------------------------------------
// Results

struct TrajectoryRow {
  int run_id = 0;
  RecordRow record;
  double r = 0.0;
  double m = 2.0;
};

struct ConstantRow {
  std::string name;
  double value = 0.0;
  std::string formula;
};

struct ScenarioResult {
  Scenario scenario = Scenario::simulate;
  std::vector<TrajectoryRow> trajectory;
  std::vector<ConstantRow> constants;
  std::vector<Verdict> verdicts;

  bool all_pass() const noexcept;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides [ensemble] seed
  int jobs = 1;
};

/// Runs a scenario in memory. Independent runs are spread over `jobs`
/// worker threads; results are collected in run-id order, so the output does
/// not depend on jobs. Throws StepFailure or other Error on solver failure.
ScenarioResult run_scenario(Scenario scenario, const ExperimentConfig& config,
                            const RunOptions& options = {});

// ---------------------------------------------------------------------------
// Artifacts

extern const char* const kTrajectoryColumns;
extern const char* const kConstantsColumns;
extern const char* const kVerdictColumns;

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);
std::string constants_csv(const std::vector<ConstantRow>& rows);
std::string verdicts_csv(const std::vector<Verdict>& rows);
/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite.
std::string format_number(double value);

/// Writes trajectory.csv, constants.csv, verdicts.csv and manifest.ini.
void write_artifacts(const std::filesystem::path& dir, const ScenarioResult& result,
                     const ExperimentConfig& config, const RunOptions& options);

const char* library_version() noexcept;

enum ExitCode : int { kExitOk = 0, kExitVerdictFailed = 1, kExitConfig = 2, kExitSolver = 3 };

/// Loads the config, runs the scenario and writes the artifacts. Returns the
/// process exit code; `message` receives a diagnostic on failure.
int run_scenario_to_dir(std::string_view scenario, const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir, const RunOptions& options,
                        std::string& message);

}  // namespace thermistor
