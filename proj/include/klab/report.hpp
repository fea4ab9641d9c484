#pragma once

#include <string>
#include <utility>
#include <vector>

namespace klab {

/// One bound verification: left side, right side, their ratio, and whether
/// the bound holds. `params` is an ordered key -> value record (insertion
/// order is the serialization order); the comparison tolerance, when one
/// applies, is recorded there under "tol".
struct BoundReport {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  bool holds = false;
  double err = 0.0;  // accumulated numerical error of lhs, 0 for exact counts
  std::vector<std::pair<std::string, std::string>> params;

  void add_param(std::string key, std::string value);
  void add_param(std::string key, double value);
  void add_param(std::string key, std::uint64_t value);
  void add_param(std::string key, std::int64_t value);
  void add_param(std::string key, int value);
  void add_param(std::string key, bool value);
  const std::string* find_param(const std::string& key) const;
};

// lhs/rhs with the conventions reports use (0/0 = 1, x/0 = inf).
double safe_ratio(double lhs, double rhs);

// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double v);

}  // namespace klab
