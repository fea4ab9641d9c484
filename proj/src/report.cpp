#include "klab/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace klab {

void BoundReport::add_param(std::string key, std::string value) {
  params.emplace_back(std::move(key), std::move(value));
}
void BoundReport::add_param(std::string key, double value) {
  params.emplace_back(std::move(key), format_double(value));
}
void BoundReport::add_param(std::string key, std::uint64_t value) {
  params.emplace_back(std::move(key), std::to_string(value));
}
void BoundReport::add_param(std::string key, std::int64_t value) {
  params.emplace_back(std::move(key), std::to_string(value));
}
void BoundReport::add_param(std::string key, int value) {
  params.emplace_back(std::move(key), std::to_string(value));
}
void BoundReport::add_param(std::string key, bool value) {
  params.emplace_back(std::move(key), value ? "true" : "false");
}

const std::string* BoundReport::find_param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return &v;
  return nullptr;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace klab
