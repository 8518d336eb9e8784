#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace canon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured quantities, key=value separated by spaces
};

inline constexpr int kCriterionCount = 11;

/// Runs one acceptance criterion (1..kCriterionCount). Randomized instances derive from `seed`.
CriterionResult run_criterion(int id, std::uint64_t seed = 0);

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 0);

/// "PASS [n] name: detail" / "FAIL [n] name: detail".
std::string format_result(const CriterionResult& r);

}  // namespace canon
