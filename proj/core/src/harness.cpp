#include "oomi/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "oomi/oracles.hpp"

namespace oomi {

std::string to_string(Domain d) { return d == Domain::Hanoi ? "hanoi" : "nine_rooms"; }

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Apmi: return "apmi";
    case Algorithm::Aopmi: return "aopmi";
    case Algorithm::Oomi: return "oomi";
  }
  return "oomi";
}

Domain domain_from_string(const std::string& name) {
  if (name == "hanoi") return Domain::Hanoi;
  if (name == "nine_rooms") return Domain::NineRooms;
  throw DomainError("unknown domain '" + name + "' (expected hanoi or nine_rooms)");
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "apmi") return Algorithm::Apmi;
  if (name == "aopmi") return Algorithm::Aopmi;
  if (name == "oomi") return Algorithm::Oomi;
  throw DomainError("unknown algorithm '" + name + "' (expected apmi, aopmi or oomi)");
}

void validate(const RunSpec& spec) {
  const int max = spec.domain == Domain::Hanoi ? kHanoiMaxDiscs : kNineRoomsMaxLevel;
  if (spec.size < 1 || spec.size > max) {
    throw DomainError(to_string(spec.domain) + ": size must be in [1, " + std::to_string(max) + "]");
  }
  validate(spec.config);
  if (spec.prune && !(*spec.prune >= 0.0)) throw DomainError("prune must be non-negative");
}

double effective_slip(const RunSpec& spec) {
  if (spec.slip) return *spec.slip;
  return spec.domain == Domain::Hanoi ? kHanoiSlip : kNineRoomsSlip;
}

PlannerConfig effective_config(const RunSpec& spec) {
  PlannerConfig cfg = spec.config;
  // Deterministic problems reach their fixed point exactly.
  if (!spec.stochastic) cfg.exact = true;
  if (spec.prune) {
    cfg.prune = *spec.prune;
  } else if (spec.stochastic) {
    cfg.prune = kStochasticPrune;
  }
  return cfg;
}

Problem build_problem(const RunSpec& spec) {
  validate(spec);
  Problem p;
  const double slip = effective_slip(spec);
  if (spec.domain == Domain::Hanoi) {
    p.mdp = hanoi_mdp(spec.size, spec.stochastic, slip);
    p.subgoals = hanoi_subgoals(spec.size, spec.subgoal_scale.value_or(kHanoiSubgoalScale));
    p.start = hanoi_start(spec.size);
  } else {
    p.mdp = nine_rooms_mdp(spec.size, spec.stochastic, slip, spec.goal_corner);
    p.start = NineRoomsLayout(spec.size).index(nine_rooms_start(spec.size, spec.goal_corner));
  }
  p.actions = action_models(p.mdp);
  p.floor = true_value_model(p.mdp);
  if (spec.domain == Domain::NineRooms) {
    p.subgoals.push_back({"G-", p.floor, std::nullopt, true});
    if (spec.size >= 2) {
      auto doors =
          nine_rooms_subgoals(spec.size, spec.subgoal_scale.value_or(kNineRoomsSubgoalScale));
      p.subgoals.insert(p.subgoals.end(), std::make_move_iterator(doors.begin()),
                        std::make_move_iterator(doors.end()));
    }
  }
  return p;
}

RunResult run(const RunSpec& spec) { return run(spec, build_problem(spec)); }

RunResult run(const RunSpec& spec, const Problem& problem) {
  const PlannerConfig cfg = effective_config(spec);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  std::size_t value_index = 0;
  switch (spec.algorithm) {
    case Algorithm::Apmi:
      out.report = optimality_iterate_value(problem.actions, problem.floor, cfg);
      break;
    case Algorithm::Aopmi:
      out.report = aopmi(problem.mdp, problem.subgoals, cfg);
      break;
    case Algorithm::Oomi:
      out.report = oomi(problem.actions, problem.subgoals, problem.floor, cfg);
      value_index = true_value_index(problem.subgoals);
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  const auto r = out.report.models.at(value_index).rewards();
  out.value.assign(r.begin(), r.end());
  out.value_at_start = out.value.at(problem.start);
  return out;
}

namespace {

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

std::vector<double> composed_values(const ModelMatrix& m, const std::vector<double>& goal) {
  std::vector<double> v(m.size());
  for (std::size_t s = 0; s < m.size(); ++s) v[s] = composed_value(m, s, goal);
  return v;
}

// Checks the joint, beta- and pi-option solvers on one base set and subgoal.
void check_option_solvers(const ModelSet& base, const SubgoalSpec& g, const ModelMatrix& floor,
                          EnumerationCheck& check) {
  PlannerConfig cfg;
  cfg.eps = 1e-12;
  const std::vector<double> goal(g.g.rewards().begin(), g.g.rewards().end());
  const std::size_t n = base.states();

  const auto joint = optimality_iterate_option(base, g, floor, cfg);
  check.max_gap = std::max(check.max_gap, max_gap(composed_values(joint.model(), goal),
                                                  enumerate_option_values(base, goal)));
  ++check.instances;

  Termination beta = Termination::constant(n, 0.0);
  beta.beta[n - 1] = 1.0;
  EnumerationScope beta_scope;
  beta_scope.beta = beta;
  const auto fixed_beta = optimality_iterate_beta_option(base, beta, g, floor, cfg);
  check.max_gap = std::max(check.max_gap, max_gap(composed_values(fixed_beta.model(), goal),
                                                  enumerate_option_values(base, goal, beta_scope)));
  ++check.instances;

  const PolicyWeights pi = PolicyWeights::uniform(base);
  EnumerationScope pi_scope;
  pi_scope.pi = pi;
  const auto fixed_pi = optimality_iterate_pi_option(base, pi, g, floor, cfg);
  check.max_gap = std::max(check.max_gap, max_gap(composed_values(fixed_pi.model(), goal),
                                                  enumerate_option_values(base, goal, pi_scope)));
  ++check.instances;
}

Mdp builtin_mdp(int variant) {
  // Three states, two actions, gamma 0.9; variant picks the transition layout.
  const double g = 0.9;
  Mdp mdp;
  mdp.n = 3;
  mdp.gamma = g;
  mdp.exit.assign(3, 0);
  std::vector<std::vector<std::vector<double>>> p;
  std::vector<std::vector<double>> r;
  if (variant == 0) {
    p = {{{0, g, 0}, {0, 0, g}, {0, 0, g}}, {{g, 0, 0}, {g / 2, 0, g / 2}, {0, g, 0}}};
    r = {{-1, 0, 1}, {0, -1, 0}};
  } else if (variant == 1) {
    p = {{{g / 2, g / 2, 0}, {0, g / 2, g / 2}, {g, 0, 0}}, {{0, 0, g}, {g, 0, 0}, {0, g / 2, g / 2}}};
    r = {{0, 1, -1}, {-1, 0, 0}};
  } else {
    p = {{{0, g, 0}, {0, g, 0}, {g / 2, 0, g / 2}}, {{0, g / 2, g / 2}, {0, 0, g}, {g, 0, 0}}};
    r = {{1, -1, 0}, {0, 0, -1}};
  }
  for (std::size_t a = 0; a < 2; ++a) {
    mdp.actions.push_back({"a" + std::to_string(a), ModelMatrix::from_dense(r[a], p[a]),
                           std::vector<char>(3, 1)});
  }
  validate(mdp);
  return mdp;
}

}  // namespace

EnumerationCheck builtin_enumeration_suite() {
  EnumerationCheck check;
  const std::vector<std::vector<double>> goals{{0, 0, 10}, {3, -2, 0}, {0, 5, 1}};
  for (int variant = 0; variant < 3; ++variant) {
    const Mdp mdp = builtin_mdp(variant);
    const ModelSet base = action_models(mdp);
    const ModelMatrix floor = true_value_model(mdp);
    for (const auto& goal : goals) {
      check_option_solvers(base, {"g", ModelMatrix::value_model(goal), std::nullopt, false}, floor,
                           check);
    }
  }
  return check;
}

VerificationReport verify(const RunSpec& spec, double tol) {
  if (!(tol > 0.0)) throw DomainError("verify: tolerance must be positive");
  VerificationReport v;
  v.tol = tol;
  const Problem problem = build_problem(spec);
  v.result = run(spec, problem);

  const ValueIterationResult oracle = value_iteration_oracle(problem.mdp, 1e-12);
  v.oracle_sweeps = oracle.sweeps;
  v.value_gap = max_gap(v.result.value, oracle.value);

  if (problem.mdp.n <= 4) {
    EnumerationCheck check;
    for (const SubgoalSpec& g : problem.subgoals) {
      if (g.true_value) continue;
      check_option_solvers(problem.actions, g, problem.floor, check);
    }
    v.problem_enumeration = check;
  }
  v.builtin_enumeration = builtin_enumeration_suite();

  v.passed = v.result.report.converged && oracle.converged && v.value_gap <= tol &&
             v.builtin_enumeration.max_gap <= 1e-8 &&
             (!v.problem_enumeration || v.problem_enumeration->max_gap <= 1e-8);
  return v;
}

}  // namespace oomi
