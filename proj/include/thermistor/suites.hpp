#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace thermistor {

/// One row of verdicts.csv. A check passes iff lhs <= rhs; margin = rhs - lhs.
/// parameters is a ';'-separated list of key=value pairs (never a comma).
struct Verdict {
  std::string check;
  std::string parameters;
  double lhs = 0.0;
  double rhs = 0.0;

  bool pass() const noexcept { return lhs <= rhs; }
  double margin() const noexcept { return rhs - lhs; }
};

/// Random (a, b) pairs in dimensions 1-3 for m in {2, 2.5, 3, 4, 6}, plus
/// formula validation at m in {1.3, 1.7}. One verdict per m:
/// lhs = max (rhs_T - lhs_T) / (1 + rhs_T), rhs = 1e-12.
std::vector<Verdict> tartar_suite(std::uint64_t seed, std::size_t samples);

/// |Psi*(alpha(t)) - (t alpha(t) - Psi(t))| / (1e-10 (1 + |t|^4)) over
/// t in [-10, 10], one verdict per built-in material family with rhs = 1.
/// Psi* is evaluated through the Legendre maximiser, not the closed form.
std::vector<Verdict> legendre_suite(std::uint64_t seed, std::size_t samples_per_family);

/// Integrates z' = eta - delta z^q from random z(0) >= 0 with an adaptive
/// Dormand-Prince scheme and compares with ghidaglia_envelope at every
/// sample time. lhs = max(z - envelope) over all draws, rhs = 1e-8.
std::vector<Verdict> ghidaglia_suite(std::uint64_t seed, std::size_t draws);

/// Integrates z' = h z + theta g(s), theta in [0, 1], for random constant
/// h >= 0 and g = a sin^2(s) + b, then runs gronwall_check. lhs counts
/// failing draws, rhs = 0.
std::vector<Verdict> gronwall_suite(std::uint64_t seed, std::size_t draws);

/// Random tiny 1D problems (<= 5 interior nodes, m in {2, 3, 4}, both
/// nonlinear material families): implicit_step after Picard convergence
/// against brute_force_step. lhs = max node difference, rhs = 1e-9.
std::vector<Verdict> oracle_suite(std::uint64_t seed, std::size_t configs);

}  // namespace thermistor
