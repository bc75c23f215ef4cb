#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "oomi/harness.hpp"

namespace oomi {

namespace {

int algorithm_rank(const std::string& name) {
  if (name == "apmi") return 0;
  if (name == "aopmi") return 1;
  if (name == "oomi") return 2;
  return 3;
}

bool row_less(const BenchRow& a, const BenchRow& b) {
  return std::make_tuple(a.domain, a.variant, a.size, algorithm_rank(a.algorithm), a.algorithm) <
         std::make_tuple(b.domain, b.variant, b.size, algorithm_rank(b.algorithm), b.algorithm);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("bench CSV: bad number '" + s + "'");
  }
  if (used != s.size()) throw DomainError("bench CSV: bad number '" + s + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("bench CSV: bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

bool BenchTable::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.ok; });
}

BenchTable bench_table(const std::vector<RunSpec>& specs) {
  if (specs.empty()) throw DomainError("bench_table: no runs requested");
  BenchTable table;
  for (const RunSpec& spec : specs) {
    BenchRow row;
    row.domain = to_string(spec.domain);
    row.variant = spec.stochastic ? "stoch" : "det";
    row.size = spec.size;
    row.algorithm = to_string(spec.algorithm);
    const RunResult r = run(spec);
    row.eps = r.report.eps;
    row.iterations = r.report.iterations;
    row.backups_per_state = r.report.backups_per_state;
    row.value_at_start = r.value_at_start;
    row.runtime_ms = r.runtime_ms;
    row.ok = r.report.converged;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), row_less);
  return table;
}

std::string to_csv(const BenchTable& table) {
  std::string out = kBenchCsvHeader;
  out += '\n';
  for (const BenchRow& r : table.rows) {
    out += r.domain + ',' + r.variant + ',' + std::to_string(r.size) + ',' + r.algorithm +
           (r.ok ? "" : "!") + ',' + std::to_string(r.iterations) + ',' +
           fmt_double(r.backups_per_state) + ',' + fmt_double(r.value_at_start) + ',' +
           fmt_double(r.eps) + ',' + fmt_double(r.runtime_ms) + '\n';
  }
  return out;
}

BenchTable parse_bench_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kBenchCsvHeader) {
    throw DomainError("bench CSV: missing or unexpected header");
  }
  BenchTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw DomainError("bench CSV: expected 9 fields in '" + line + "'");
    BenchRow r;
    r.domain = f[0];
    r.variant = f[1];
    r.size = parse_int<int>(f[2]);
    r.algorithm = f[3];
    if (!r.algorithm.empty() && r.algorithm.back() == '!') {
      r.algorithm.pop_back();
      r.ok = false;
    }
    r.iterations = parse_int<std::size_t>(f[4]);
    r.backups_per_state = parse_double(f[5]);
    r.value_at_start = parse_double(f[6]);
    r.eps = parse_double(f[7]);
    r.runtime_ms = parse_double(f[8]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string to_text(const BenchTable& table) {
  // One block per (domain, variant); one line per N with iters/backs per algorithm.
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::map<int, std::map<int, const BenchRow*>>> groups;
  std::map<Key, std::map<int, std::string>> algos;
  for (const BenchRow& r : table.rows) {
    const Key k{r.domain, r.variant};
    const int rank = algorithm_rank(r.algorithm);
    groups[k][r.size][rank] = &r;
    algos[k][rank] = r.algorithm;
  }

  std::ostringstream out;
  char buf[64];
  for (const auto& [key, by_size] : groups) {
    out << (key.second == "det" ? "Deterministic " : "Stochastic ") << key.first << '\n';
    out << "   N";
    for (const auto& [rank, name] : algos[key]) {
      std::snprintf(buf, sizeof buf, " | %-8s %10s %10s", name.c_str(), "iters", "backs");
      out << buf;
    }
    out << '\n';
    for (const auto& [size, by_algo] : by_size) {
      std::snprintf(buf, sizeof buf, "%4d", size);
      out << buf;
      for (const auto& [rank, name] : algos[key]) {
        const auto it = by_algo.find(rank);
        if (it == by_algo.end()) {
          std::snprintf(buf, sizeof buf, " | %-8s %10s %10s", "", "-", "-");
        } else {
          const BenchRow& r = *it->second;
          std::snprintf(buf, sizeof buf, " | %-8s %10zu %10.0f", r.ok ? "" : "FAILED",
                        r.iterations, r.backups_per_state);
        }
        out << buf;
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace oomi
