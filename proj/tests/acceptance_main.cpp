// Runs the full acceptance checklist and prints one line per criterion.
// Exit code 0 only if every criterion passes.

#include <cstdio>

#include "dph/acceptance.hpp"

int main() {
  dph::AcceptanceOptions opts;  // full set, default tolerances
  const std::vector<dph::CheckResult> results = dph::run_acceptance(opts);

  bool all_passed = true;
  for (const dph::CheckResult& r : results) {
    std::printf("%s %s (%.2fs) %s -- %s\n", r.id.c_str(), r.passed ? "PASS" : "FAIL",
                r.seconds, r.label.c_str(), r.detail.c_str());
    all_passed = all_passed && r.passed;
  }
  std::printf("%s\n", all_passed ? "ACCEPTANCE: all criteria passed"
                                 : "ACCEPTANCE: FAILURES PRESENT");
  return all_passed ? 0 : 1;
}
