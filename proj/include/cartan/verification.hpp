// Invariant suites shared by the command-line verifier and the acceptance
// runner. Every suite reports measured residuals next to its threshold.

#ifndef CARTAN_VERIFICATION_HPP
#define CARTAN_VERIFICATION_HPP

#include <string>
#include <vector>

namespace cartan {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool pass() const;
};

struct VerifyOptions {
  unsigned seed = 0;
  int jobs = 1;
  /// Duration lattice of the brute-force section.
  int section_grid = 200;
};

/// Suite names in their canonical run order.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, const VerifyOptions& options = {});

}  // namespace cartan

#endif  // CARTAN_VERIFICATION_HPP
