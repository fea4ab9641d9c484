#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "klab/report.hpp"

namespace klab {

/// One output row of a sweep. Serialization is lossless: doubles are written
/// with 17 significant digits. `hard` is experiment metadata (does this row
/// gate the exit status); it is decided by the experiment definition, never
/// inferred from the numbers, and is not itself serialized.
struct ReportRow {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool holds = true;
  double err = 0.0;
  double runtime_ms = 0.0;
  bool hard = false;
};

ReportRow row_from_report(std::string experiment, const BoundReport& rep,
                          bool hard);

/// CSV with the fixed column set
/// experiment,param_*,lhs,rhs,ratio,holds,err,runtime_ms.
/// Param columns are the union of keys in first-appearance order.
std::string rows_to_csv(const std::vector<ReportRow>& rows);

/// JSON array of flat records with the same keys as the CSV columns.
std::string rows_to_json(const std::vector<ReportRow>& rows);

/// Canonical text for row-set comparisons: serialized CSV with the
/// runtime_ms column blanked.
std::string rows_fingerprint(const std::vector<ReportRow>& rows);

/// Executes `point` for indices [0, n_points) on a bounded worker pool and
/// returns the concatenated rows in index order, so serial and parallel runs
/// of the same sweep produce identical row sets.
std::vector<ReportRow> run_sweep(
    std::size_t n_points, unsigned jobs,
    const std::function<std::vector<ReportRow>(std::size_t)>& point);

/// Deterministic per-point seed stream derived from the recorded sweep seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// "7" | "2..300" | "97,360,1009". Throws ConfigError on malformed input
/// (including reversed ranges).
std::vector<std::uint64_t> parse_range(const std::string& text);

/// Flat key=value config file ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_config_file(const std::string& path);

}  // namespace klab
