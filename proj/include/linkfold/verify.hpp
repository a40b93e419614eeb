#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace linkfold::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  int cases = 0;
  std::string detail;  // worst observed value or first failure
};

struct Report {
  std::vector<CheckResult> checks;

  int passed() const;
  int failed() const;
};

/// Property checks over seeded random inputs: calculus against finite
/// differences, solver invariants, and short flow runs. Deterministic for a
/// fixed seed.
Report run_property_suite(std::uint64_t seed);

}  // namespace linkfold::verify
