// acceptance.hpp — The self-check battery behind `dph validate` and the
// standalone acceptance runner. Each check pins its own parameter matrix and
// tolerance and reports the numbers that justify its verdict.

#pragma once

#include <string>
#include <vector>

namespace dph {

struct CheckResult {
  std::string id;      // stable short id, "A1".."A8"
  std::string label;
  bool passed{false};
  double seconds{0.0};
  std::string detail;  // the measured numbers and the tolerance they faced
};

struct AcceptanceOptions {
  bool full{true};           // false drops the exactness/gauge batteries (A7, A8)
  double lambda_scale{1.0};  // scales every canonical coupling; 1 = as shipped
  double tol_scale{1.0};     // scales every tolerance; 1 = as shipped
  unsigned seed{20260819u};  // randomized batteries are deterministic per seed
};

// Runs the battery in order. A check that throws is reported as failed with
// the exception text; the battery always returns one result per check.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace dph
