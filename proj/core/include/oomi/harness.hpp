#pragma once

// Experiment runner: builds a benchmark problem, dispatches to a planner,
// cross-checks against oracles and assembles sweep tables.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oomi/domains.hpp"
#include "oomi/mdp.hpp"
#include "oomi/planners.hpp"

namespace oomi {

enum class Domain { Hanoi, NineRooms };
enum class Algorithm { Apmi, Aopmi, Oomi };

std::string to_string(Domain d);
std::string to_string(Algorithm a);
Domain domain_from_string(const std::string& name);
Algorithm algorithm_from_string(const std::string& name);

struct RunSpec {
  Domain domain = Domain::Hanoi;
  int size = 3;
  bool stochastic = false;
  /// Defaults to 0.4 (Hanoi) or 0.05 (Nine Rooms).
  std::optional<double> slip;
  Algorithm algorithm = Algorithm::Oomi;
  PlannerConfig config{};
  /// Reserved for Monte-Carlo checks; planning itself is deterministic.
  std::uint64_t seed = 0;
  /// Defaults to 1e4 (Hanoi) or 1e3 (Nine Rooms).
  std::optional<double> subgoal_scale;
  /// Transition entries at or below this are dropped as rows are rebuilt.
  /// Defaults to kStochasticPrune for stochastic variants and to the planner
  /// default otherwise.
  std::optional<double> prune;
  Corner goal_corner = Corner::NorthWest;
};

/// Throws DomainError if the size is outside the domain's range.
void validate(const RunSpec& spec);

/// Stochastic option models carry long tails of negligible mass that cost
/// far more to compose than they contribute.
inline constexpr double kStochasticPrune = 1e-10;

double effective_slip(const RunSpec& spec);
/// The planner configuration a run actually uses.
PlannerConfig effective_config(const RunSpec& spec);

struct Problem {
  Mdp mdp;
  ModelSet actions;
  std::vector<SubgoalSpec> subgoals;  // always contains G-
  ModelMatrix floor;                  // G-
  std::size_t start = 0;
};

Problem build_problem(const RunSpec& spec);

struct RunResult {
  ExperimentReport report;
  /// Reward block of the G- model (the value function).
  std::vector<double> value;
  double value_at_start = 0.0;
  double runtime_ms = 0.0;
};

RunResult run(const RunSpec& spec);
RunResult run(const RunSpec& spec, const Problem& problem);

struct EnumerationCheck {
  std::size_t instances = 0;
  double max_gap = 0.0;
};

struct VerificationReport {
  RunResult result;
  std::size_t oracle_sweeps = 0;
  /// Max-norm gap between the planner's value function and value iteration.
  double value_gap = 0.0;
  double tol = 0.0;
  /// Present when the problem is small enough to enumerate options.
  std::optional<EnumerationCheck> problem_enumeration;
  EnumerationCheck builtin_enumeration;
  bool passed = false;
};

/// Runs the spec, then compares against a value-iteration oracle at
/// eps = 1e-12 and against option enumeration on small instances.
VerificationReport verify(const RunSpec& spec, double tol);

/// Small fixed MDPs on which every option solver is checked by enumeration.
EnumerationCheck builtin_enumeration_suite();

// ---------------------------------------------------------------------------
// Sweep tables
// ---------------------------------------------------------------------------

struct BenchRow {
  std::string domain;
  std::string variant;  // det | stoch
  int size = 0;
  std::string algorithm;
  std::size_t iterations = 0;
  double backups_per_state = 0.0;
  double value_at_start = 0.0;
  double eps = 0.0;
  double runtime_ms = 0.0;
  bool ok = true;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchTable {
  std::vector<BenchRow> rows;

  bool all_ok() const;
  friend bool operator==(const BenchTable&, const BenchTable&) = default;
};

inline constexpr const char* kBenchCsvHeader =
    "domain,variant,N,algorithm,iterations,backups_per_state,value_at_start,eps,runtime_ms";

/// Runs every spec and returns rows sorted by (domain, variant, N, algorithm).
BenchTable bench_table(const std::vector<RunSpec>& specs);

/// A failed run is written with a trailing '!' on its algorithm field.
std::string to_csv(const BenchTable& table);
BenchTable parse_bench_csv(const std::string& text);
/// Text table grouped by domain and variant, one column pair per algorithm.
std::string to_text(const BenchTable& table);

}  // namespace oomi
