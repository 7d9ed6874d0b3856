#pragma once

#include <string>
#include <vector>

namespace aptk::suite {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values and thresholds, for the report
};

/// The desk-scale verification battery: class hierarchy on the catalog,
/// counterexample falsifications, metric/convolution oracles, dichotomy and
/// Picard checks, the spectral heat example, and the structural-invariant
/// sweep. Deterministic given the seed.
std::vector<CriterionResult> run_paper_checks(unsigned seed = 20240811);

}  // namespace aptk::suite
