#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crancap {

// One self-check suite: randomized cross-validation of closed forms,
// reductions, and bound orderings against independent recomputations.
struct SuiteResult {
  std::string suite;
  int checks = 0;
  int failures = 0;
  std::vector<std::string> notes;  // one reproduction line per failure
};

// Names accepted by run_suite, in reporting order. "all" is not listed; it
// expands to every entry.
const std::vector<std::string>& suite_names();

// Runs one named suite with the given seed. Throws std::invalid_argument for
// an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

// Runs `name` ("all" for every suite) and appends the results.
std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed);

}  // namespace crancap
