#pragma once

#include <map>
#include <string>
#include <vector>

#include "klab/harness.hpp"

namespace klab {

/// A parsed experiment invocation. `options` holds the experiment-specific
/// keys (ranges, flags); unknown keys are a configuration error.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> options;
  std::string output = "-";  // "-" = stdout
  std::string format = "csv";
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct ExperimentResult {
  std::vector<ReportRow> rows;
  bool any_hard_failure = false;
};

/// Names accepted as the experiment selector, in CLI listing order.
const std::vector<std::string>& experiment_names();

/// Runs one experiment sweep. Throws ConfigError for bad names, unknown or
/// malformed options; BudgetExceeded propagates from the library.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Serializes rows in the configured format and writes them to cfg.output
/// ("-" for stdout).
void write_rows(const ExperimentConfig& cfg, const std::vector<ReportRow>& rows);

}  // namespace klab
