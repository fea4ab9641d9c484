#pragma once

#include <string>
#include <vector>

namespace klab {

/// One acceptance criterion outcome. `measured_only` marks the
/// explicitly-not-reproducible criterion (asymptotic constants): its rows are
/// recorded and it never gates the suite.
struct CriterionResult {
  int id = 0;
  std::string label;
  bool pass = false;
  bool measured_only = false;
  double runtime_ms = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// "tally": flip one energy tally, which must surface as a criterion-3
  /// failure (the harness's own fault-detection check).
  std::string inject_fault;
  unsigned jobs = 1;
};

/// Runs the full hard-check acceptance suite at its pinned budgets.
std::vector<CriterionResult> verify_all(const VerifyOptions& opts = {});

/// True when every non-measurement criterion passed.
bool verify_passed(const std::vector<CriterionResult>& results);

}  // namespace klab
