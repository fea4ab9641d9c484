#include "klab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "klab/errors.hpp"

namespace klab {

ReportRow row_from_report(std::string experiment, const BoundReport& rep,
                          bool hard) {
  ReportRow row;
  row.experiment = std::move(experiment);
  row.params = rep.params;
  row.params.emplace(row.params.begin(), "check", rep.label);
  row.lhs = rep.lhs;
  row.rhs = rep.rhs;
  row.ratio = rep.ratio;
  row.holds = rep.holds;
  row.err = rep.err;
  row.hard = hard;
  return row;
}

namespace {

std::vector<std::string> param_columns(const std::vector<ReportRow>& rows) {
  std::vector<std::string> cols;
  for (const auto& row : rows) {
    for (const auto& [k, v] : row.params) {
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    }
  }
  return cols;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_body(const std::vector<ReportRow>& rows, bool with_runtime) {
  auto cols = param_columns(rows);
  std::ostringstream out;
  out << "experiment";
  for (const auto& c : cols) out << ",param_" << c;
  out << ",lhs,rhs,ratio,holds,err,runtime_ms\n";
  for (const auto& row : rows) {
    out << csv_escape(row.experiment);
    for (const auto& c : cols) {
      out << ',';
      for (const auto& [k, v] : row.params) {
        if (k == c) {
          out << csv_escape(v);
          break;
        }
      }
    }
    out << ',' << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
        << format_double(row.ratio) << ',' << (row.holds ? "true" : "false")
        << ',' << format_double(row.err) << ',';
    if (with_runtime) out << format_double(row.runtime_ms);
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  return csv_body(rows, /*with_runtime=*/true);
}

std::string rows_fingerprint(const std::vector<ReportRow>& rows) {
  return csv_body(rows, /*with_runtime=*/false);
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    obj["experiment"] = row.experiment;
    for (const auto& [k, v] : row.params) obj["param_" + k] = v;
    obj["lhs"] = row.lhs;
    obj["rhs"] = row.rhs;
    obj["ratio"] = row.ratio;
    obj["holds"] = row.holds;
    obj["err"] = row.err;
    obj["runtime_ms"] = row.runtime_ms;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<ReportRow> run_sweep(
    std::size_t n_points, unsigned jobs,
    const std::function<std::vector<ReportRow>(std::size_t)>& point) {
  std::vector<std::vector<ReportRow>> slots(n_points);
  if (jobs <= 1 || n_points <= 1) {
    for (std::size_t i = 0; i < n_points; ++i) slots[i] = point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;
    auto worker = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= n_points || failed.load()) return;
        try {
          slots[i] = point(i);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!failed.exchange(true)) first_error = e.what();
          return;
        }
      }
    };
    unsigned n_threads = std::min<std::size_t>(jobs, n_points);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw Error(first_error);
  }
  std::vector<ReportRow> rows;
  for (auto& s : slots)
    for (auto& r : s) rows.push_back(std::move(r));
  return rows;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("expected unsigned integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ConfigError("integer out of range: '" + s + "'");
  }
}

}  // namespace

std::vector<std::uint64_t> parse_range(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string piece =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (piece.empty()) throw ConfigError("empty range element in '" + text + "'");
    std::size_t dots = piece.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_u64(piece));
    } else {
      std::uint64_t lo = parse_u64(piece.substr(0, dots));
      std::uint64_t hi = parse_u64(piece.substr(dots + 2));
      if (lo > hi)
        throw ConfigError("malformed range '" + piece + "' (lo > hi)");
      if (hi - lo > 10'000'000) throw ConfigError("range too large: " + piece);
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty range '" + text + "'");
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string stripped = strip(line);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    std::string key = strip(stripped.substr(0, eq));
    std::string value = strip(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

}  // namespace klab
