#pragma once

// MDP representation and exact evaluation of policy and option models.
//
// Transition matrices are stored already discounted, P[a](s, s') =
// gamma * Pr(s' | s, a). Nothing downstream multiplies by gamma again.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oomi/model.hpp"

namespace oomi {

/// Fixed-point iteration failed to settle; under gamma = 1 this usually
/// means the policy never reaches an exit.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The problem is set up in a way that makes a requested quantity undefined.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Action {
  std::string id;
  ModelMatrix model;          // R^a and discounted P^a
  std::vector<char> available;  // per state
};

struct Mdp {
  std::size_t n = 0;
  double gamma = 1.0;
  std::vector<Action> actions;
  std::vector<char> exit;  // per state; exit rows are all zero in every action

  bool is_exit(std::size_t s) const { return exit[s] != 0; }
  std::vector<std::size_t> available_actions(std::size_t s) const;
  std::vector<std::size_t> exit_states() const;
};

/// Throws DomainError describing the first violated invariant.
void validate(const Mdp& mdp);

/// One model per action. Exit states are available for every action with a
/// zero transition row.
ModelSet action_models(const Mdp& mdp);

struct TrueValueOptions {
  double margin = 1.0;
  /// Horizon used for gamma = 1 problems; defaults to 10 * n.
  std::optional<double> horizon;
};

/// Constant value model strictly below the value of every proper policy.
ModelMatrix true_value_model(const Mdp& mdp, const TrueValueOptions& opts = {});

enum class SolveMethod { Iterative, Direct };

struct SolveConfig {
  double eps = 1e-9;
  std::size_t max_iters = 1'000'000;
  SolveMethod method = SolveMethod::Iterative;
};

/// Fixed point of V = E_pi(base) V.
ModelMatrix evaluate_policy_model(const ModelSet& base, const PolicyWeights& pi,
                                  const SolveConfig& cfg = {});

/// Fixed point of M = E_pi(base) E_beta(I, M).
ModelMatrix evaluate_option_model(const ModelSet& base, const PolicyWeights& pi,
                                  const Termination& beta, const SolveConfig& cfg = {});

/// A subgoal value model with an optional initiation set.
struct SubgoalSpec {
  std::string name;
  ModelMatrix g;
  std::optional<std::vector<State>> initiation;
  /// Marks the true value model G-; its final model is a value function.
  bool true_value = false;
};

/// Throws DomainError when g has transitions or the initiation set is out of
/// range.
void validate(const SubgoalSpec& spec);

}  // namespace oomi
