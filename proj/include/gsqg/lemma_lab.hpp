#pragma once

// Randomized verification of the quantitative curve and mollifier inequalities, and the
// periodic maximal operator.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gsqg {

// Mf(i) = max over k = 1..n/2 of the averages of |f| over the k nodes starting or ending at i.
std::vector<double> maximal_operator(const std::vector<double>& f);

struct CheckEntry {
  std::string name;
  std::string statement;
  bool checked = true;  // false: reported only, constant unspecified
  std::size_t evaluations = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // lhs / rhs, 1 is sharp
  nlohmann::json witness;    // configuration of the worst ratio
  bool passed() const { return violations == 0; }
};

struct CheckReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0, N = 0;
  double circle_saturation = 0.0;  // l / (|g|_inf^2 |g|_H2^2) on a centered circle
  std::vector<CheckEntry> entries;
  bool passed() const;
  nlohmann::json to_json() const;
  std::string table() const;
};

// Multiplicative and additive slack applied to every continuum inequality.
inline constexpr double kCheckSlack = 0.02;
inline constexpr double kCheckFloor = 1e-6;

// Deterministic in (seed, trials, N) regardless of thread count.
CheckReport check_suite(std::uint64_t seed, std::size_t trials, std::size_t N = 256);

}  // namespace gsqg
