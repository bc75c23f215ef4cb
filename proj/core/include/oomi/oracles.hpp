#pragma once

// Reference solvers used to cross-check the planners. They deliberately take
// different routes: plain Bellman backups over the MDP, and brute-force
// enumeration of deterministic options evaluated by linear solves.

#include <cstddef>
#include <optional>
#include <vector>

#include "oomi/mdp.hpp"

namespace oomi {

struct ValueIterationResult {
  std::vector<double> value;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Value iteration from V = 0 until the max-norm change is at most eps.
ValueIterationResult value_iteration_oracle(const Mdp& mdp, double eps = 1e-12,
                                            std::size_t max_sweeps = 10'000'000);

/// Which parts of the option are searched by enumeration.
struct EnumerationScope {
  /// When set, only this termination condition is considered.
  std::optional<Termination> beta;
  /// When set, only this policy is considered.
  std::optional<PolicyWeights> pi;
};

/// Per-state maximum of s O G over every deterministic option (policy over
/// the available base members, termination in {0,1}^n) that the scope
/// allows. Options whose model is undefined (an exit is never reached under
/// gamma = 1) are skipped. Intended for n <= 4.
std::vector<double> enumerate_option_values(const ModelSet& base, const std::vector<double>& goal,
                                            const EnumerationScope& scope = {});

}  // namespace oomi
