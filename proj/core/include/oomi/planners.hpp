#pragma once

// Iterative solvers for the model optimality equations, and option-option
// model iteration.
//
// All solvers use Jacobi sweeps: every row update in sweep k reads the models
// as they stood at the end of sweep k-1. Iteration and backup counts are
// therefore independent of state and subgoal ordering.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oomi/mdp.hpp"
#include "oomi/model.hpp"

namespace oomi {

/// How sweeps and row recomputations are tallied.
enum class CountMode {
  /// A sweep counts only if it changed its model by more than eps; its row
  /// recomputations count as backups. The final confirming sweep is free.
  Changed,
  /// Every sweep performed counts, including the final confirming sweep.
  Recompute,
};

std::string to_string(CountMode mode);
CountMode count_mode_from_string(const std::string& name);

struct PlannerConfig {
  /// Max-norm threshold over reward and transition entries.
  double eps = 1e-9;
  std::size_t max_iters = 1'000'000;
  TieRule tie{};
  CountMode count_mode = CountMode::Changed;
  /// Require a sweep to leave every entry unchanged up to rounding instead:
  /// changes within kRoundingSlack of the entry's magnitude are ignored and
  /// anything larger counts.
  bool exact = false;

  static constexpr double kRoundingSlack = 1e-12;
  /// Transition entries at or below this are dropped when a row is rebuilt.
  /// The default only removes values far below any representable effect.
  double prune = 1e-200;

  double threshold() const { return exact ? 0.0 : eps; }
  /// Relative change treated as rounding noise.
  double slack() const { return exact ? kRoundingSlack : 0.0; }
};

/// Throws DomainError for eps <= 0 or max_iters == 0.
void validate(const PlannerConfig& cfg);

struct ExperimentReport {
  std::size_t n = 0;
  std::size_t iterations = 0;
  std::uint64_t backups_total = 0;
  double backups_per_state = 0.0;
  /// One model per subgoal, or the single value model of a value solver.
  std::vector<ModelMatrix> models;
  std::vector<std::string> model_names;
  std::vector<char> model_converged;
  /// Largest change over all models, one entry per sweep performed.
  std::vector<double> per_iteration_residuals;
  bool converged = false;
  /// Threshold actually applied: 0 for exact runs.
  double eps = 0.0;
  CountMode count_mode = CountMode::Changed;
  /// Sweeps actually executed, whatever the counting convention.
  std::size_t sweeps = 0;

  const ModelMatrix& model() const { return models.front(); }
};

/// V <- max over base of O V, from V = floor. With base = primitive actions
/// this is value iteration.
ExperimentReport optimality_iterate_value(const ModelSet& base, const ModelMatrix& floor,
                                          const PlannerConfig& cfg = {});

/// Jointly optimal option model for subgoal g over the base set, from
/// M = floor. Termination is decided per successor state: continuing from k
/// is chosen when it is worth more than stopping in k under g.
ExperimentReport optimality_iterate_option(const ModelSet& base, const SubgoalSpec& g,
                                           const ModelMatrix& floor,
                                           const PlannerConfig& cfg = {});

/// Optimal option model for a given termination condition.
ExperimentReport optimality_iterate_beta_option(const ModelSet& base, const Termination& beta,
                                                const SubgoalSpec& g, const ModelMatrix& floor,
                                                const PlannerConfig& cfg = {});

/// Optimal option model for a given policy; only termination is searched.
ExperimentReport optimality_iterate_pi_option(const ModelSet& base, const PolicyWeights& pi,
                                              const SubgoalSpec& g, const ModelMatrix& floor,
                                              const PlannerConfig& cfg = {});

/// Option-option model iteration. One model per subgoal; candidates are the
/// base set followed by every current subgoal model. A model freezes after a
/// sweep that leaves it unchanged.
ExperimentReport oomi(const ModelSet& base, const std::vector<SubgoalSpec>& subgoals,
                      const ModelMatrix& floor, const PlannerConfig& cfg = {});

/// Two-stage planning: option models for every non-G- subgoal from primitive
/// actions, then value iteration over those options plus the actions.
ExperimentReport aopmi(const Mdp& mdp, const std::vector<SubgoalSpec>& subgoals,
                       const PlannerConfig& cfg = {});

/// Index of the first subgoal flagged as the true value model, or npos.
std::size_t true_value_index(const std::vector<SubgoalSpec>& subgoals);

}  // namespace oomi
