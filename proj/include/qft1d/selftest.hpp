#pragma once

#include <string>
#include <vector>

namespace qft1d {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Small-grid oracle battery: free-field equivalence for both field kinds,
/// analytic free evolution, split-step agreement, pseudo-unitarity, charge
/// conservation under a step, and the Fock algebra suite.
std::vector<SelftestResult> run_selftest();

}  // namespace qft1d
