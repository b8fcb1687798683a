#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thermistor/thermistor.h"

int main(int argc, char** argv) {
  CLI::App app{"Thermistor problem simulator and verifier"};
  app.set_version_flag("--version", std::string(thm_version()));

  std::string scenario;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  app.add_option("scenario", scenario,
                 "simulate | mms | reg-sweep | uniqueness | absorbing | attractor | verify")
      ->required();
  app.add_option("--config", config, "experiment INI file")->required();
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--seed", seed, "override the ensemble seed");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  int exit_code = 0;
  const thm_status status = thm_run_scenario(scenario.c_str(), config.c_str(), out.c_str(),
                                             seed.value_or(0), seed ? 1 : 0, jobs, &exit_code);
  if (status != THM_OK) {
    std::fprintf(stderr, "thermistor: %s: %s\n", thm_status_string(status), thm_last_error());
    return 3;
  }
  if (exit_code != 0) std::fprintf(stderr, "thermistor: %s\n", thm_last_error());
  return exit_code;
}
