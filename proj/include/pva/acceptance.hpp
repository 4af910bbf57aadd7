#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pva {

struct AcceptanceOptions {
  bool quick = false;           // smoke mode: reduced replicate counts
  std::vector<int> only;        // run these criteria only (empty = all)
  std::uint64_t seed = 20090719;
  int threads = 0;
  bool print = true;            // one pass/fail line per criterion on stdout
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Runs the acceptance criteria (statistical bands are 4 standard errors
/// with fixed seeds) and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace pva
