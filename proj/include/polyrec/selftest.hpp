#pragma once

#include <string>
#include <vector>

#include "polyrec/config.hpp"

namespace polyrec {

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// A fast pass over the library's invariants, one entry per check. Exceptions
// inside a check are recorded as failures.
std::vector<SelfCheck> run_selftest(const ExperimentConfig& config);

}  // namespace polyrec
