#pragma once

#include <string>
#include <vector>

namespace nmx {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;  // measured numbers, for the log line
};

// Built-in self checks.  "quick" exercises every module on a small grid;
// "full" repeats the operator identities on a finer grid and runs an
// end-to-end ground-state solve.
std::vector<CheckResult> run_checks(const std::string& level);

}  // namespace nmx
