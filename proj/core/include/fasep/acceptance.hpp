#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fasep::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double statistic = 0.0;  // worst observed statistic for the criterion
  double threshold = 0.0;
  std::uint64_t samples = 0;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  bool quick = false;  // reduced scale smoke run (< 60 s)
  std::uint64_t seed = 20250810;
  std::ostream* log = nullptr;
};

// Runs the nine acceptance criteria in order. Criterion 9 aggregates the
// structural-invariant monitors (no new adjacent empty pair, high-density
// closure, coupling invariant) installed on every trajectory simulated by
// criteria 3-8.
std::vector<CriterionResult> run_all(const Options& options);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace fasep::acceptance
