#pragma once

#include <stdexcept>
#include <string>

namespace qft1d {

// Invalid user-supplied configuration (bad grid size, bad potential
// parameters, malformed config file). Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke an API precondition (mismatched grids, off-lattice momentum).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical run left its safe region (density inside the box guard band).
// Maps to CLI exit code 2.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qft1d
