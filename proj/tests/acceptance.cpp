// Runs every acceptance criterion at its stated size and tolerance and
// prints one PASS/FAIL line each. Exit status is nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "thermistor/experiments.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/suites.hpp"

using namespace thermistor;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome from_verdicts(const std::vector<Verdict>& verdicts) {
  Outcome out;
  std::ostringstream detail;
  double worst = INFINITY;
  for (const auto& v : verdicts) {
    if (!v.pass()) {
      out.pass = false;
      detail << "failed " << v.check << "(" << v.parameters << ") lhs=" << v.lhs
             << " rhs=" << v.rhs << "; ";
    }
    worst = std::min(worst, v.margin());
  }
  detail << verdicts.size() << " checks, min margin " << worst;
  out.detail = detail.str();
  if (verdicts.empty()) out = {false, "no checks ran"};
  return out;
}

Outcome scenario(Scenario s, const char* config_name) {
  const auto config = load_config(std::string(THERMISTOR_CONFIG_DIR) + "/" + config_name);
  return from_verdicts(run_scenario(s, config, {}).verdicts);
}

Outcome poincare() {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double line = poincare_constant(Grid::interval(1.0, 256), 2.0).value;
  const double square = poincare_constant(Grid::rectangle(1.0, 1.0, 256, 256), 2.0).value;
  const double e1 = std::abs(line / pi2 - 1.0), e2 = std::abs(square / (2 * pi2) - 1.0);
  std::ostringstream detail;
  detail << "interval " << line << " (rel " << e1 << "), square " << square << " (rel " << e2
         << ")";
  return {e1 <= 0.01 && e2 <= 0.02, detail.str()};
}

}  // namespace

int main() {
  const std::uint64_t seed = 20240601;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"tartar-1e5", [&] { return from_verdicts(tartar_suite(seed, 100000)); }},
      {"legendre-1e4-per-family", [&] { return from_verdicts(legendre_suite(seed, 10000)); }},
      {"ghidaglia-1e3", [&] { return from_verdicts(ghidaglia_suite(seed, 1000)); }},
      {"oracle-equivalence-100", [&] { return from_verdicts(oracle_suite(seed, 100)); }},
      {"mms-convergence", [] { return scenario(Scenario::mms, "mms.ini"); }},
      {"uniform-linf-and-cauchy", [] { return scenario(Scenario::reg_sweep, "reg-sweep.ini"); }},
      {"comparison-contraction", [] { return scenario(Scenario::uniqueness, "uniqueness.ini"); }},
      {"absorbing-set-m4", [] { return scenario(Scenario::absorbing, "absorbing.ini"); }},
      {"attractor-m4", [] { return scenario(Scenario::attractor, "attractor.ini"); }},
      {"poincare-estimator", poincare},
  };

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-26s %6.2fs  %s\n", out.pass ? "PASS" : "FAIL", name, secs,
                out.detail.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
