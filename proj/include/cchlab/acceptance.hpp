#pragma once

// Built-in acceptance suite: twelve numbered criteria with pinned
// tolerances and runtime budgets.

#include <string>
#include <vector>

namespace cch {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  ///< measured values and failing clauses
  double seconds = 0.0;
  double budget = 0.0;  ///< runtime limit in seconds; exceeding it fails the criterion
};

int criterion_count();

/// Runs criterion id in 1..criterion_count(). Exceptions become failures.
CriterionResult run_criterion(int id);

/// "PASS  7  name  [1.2 s / 120 s]  detail"
std::string format_result(const CriterionResult& r);

}  // namespace cch
