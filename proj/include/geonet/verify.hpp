#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace geonet {

// One property suite's outcome: check count, failure count, and a detail line
// per failure (deterministic text, no timing or environment data).
struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::vector<std::string> details;
};

// All built-in suites whose name contains `filter` (empty: all), in name
// order. Randomized batteries derive from `seed` only.
std::vector<SuiteResult> run_verify_suites(const std::string& filter, std::uint64_t seed);

std::vector<std::string> verify_suite_names();

// Batch solve of every *.json scenario under `dir` (sorted by path); each
// passes iff its exit code matches the file's expectation (default: solved).
struct ScenarioCheck {
  std::string path;
  int expected = 0;
  int actual = -1;
  bool pass = false;
  std::string note;
};
std::vector<ScenarioCheck> run_scenario_checks(const std::string& dir);

// Stable text report; byte-identical across runs for fixed seed and inputs.
std::string verify_summary(std::uint64_t seed, const std::vector<SuiteResult>& suites,
                           const std::vector<ScenarioCheck>& scenarios);

bool verify_failed(const std::vector<SuiteResult>& suites,
                   const std::vector<ScenarioCheck>& scenarios);

}  // namespace geonet
