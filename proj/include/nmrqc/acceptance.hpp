#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nmrqc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;  // deterministic "name = value" lines
  double seconds = 0.0;              // wall time, reported separately
};

struct AcceptanceOptions {
  std::uint64_t seed = 42;
  unsigned workers = 0;  // 0 = hardware concurrency
};

inline constexpr int acceptance_count = 14;

// criteria 1..13 each evaluate one headline reproduction; criterion 14 requires
// every other criterion to pass and two seeded scenario runs to be byte-identical
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {}, bool include_final = true);
CriterionResult final_criterion(const std::vector<CriterionResult>& earlier, const AcceptanceOptions& opts);

// "PASS  3 gain factor ... (0.001 s)"
std::string format_result(const CriterionResult& r, bool with_time = true);

}  // namespace nmrqc
