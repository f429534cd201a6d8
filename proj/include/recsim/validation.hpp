#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace recsim::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> notes;  // measured values and tolerances
};

struct Options {
  std::uint64_t seed = 0xC0FFEE;
  bool quick = false;  // scaled-down Monte Carlo sizes, for smoke runs
  int workers = 0;     // 0 = all available
};

// Runs the full acceptance suite (criteria 1..12).
std::vector<CriterionResult> run_all(const Options& options);

// Single criterion by id.
CriterionResult run_criterion(int id, const Options& options);

bool all_pass(const std::vector<CriterionResult>& results);

std::string to_json(const std::vector<CriterionResult>& results);

}  // namespace recsim::validation
