#pragma once

// Small MDPs on a lattice (rewards in {-1, 0, 1}, transition probabilities
// in {0, 1/2, 1}, gamma 0.9) checked against exhaustive enumeration of
// deterministic options.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "oomi/oracles.hpp"
#include "oomi/planners.hpp"
#include "test_support.hpp"

namespace oomi::test {

inline constexpr double kFamilyGamma = 0.9;

/// Every distribution over n states with entries in {0, 1/2, 1} summing to 1.
inline std::vector<std::vector<double>> lattice_distributions(std::size_t n) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(n, 0.0);
    d[i] = 1.0;
    out.push_back(d);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<double> d(n, 0.0);
      d[i] = d[j] = 0.5;
      out.push_back(d);
    }
  }
  return out;
}

/// One action: row s is (reward, distribution) number code[s] of the
/// lattice, numbered reward-major.
struct LatticeAction {
  std::vector<std::size_t> code;
};

inline std::size_t lattice_row_count(std::size_t n) { return 3 * lattice_distributions(n).size(); }

inline Mdp lattice_mdp(std::size_t n, const std::vector<LatticeAction>& actions) {
  const auto dists = lattice_distributions(n);
  std::vector<std::vector<double>> rewards;
  std::vector<std::vector<std::vector<double>>> probs;
  for (const LatticeAction& a : actions) {
    std::vector<double> r(n);
    std::vector<std::vector<double>> p(n);
    for (std::size_t s = 0; s < n; ++s) {
      r[s] = static_cast<double>(a.code[s] / dists.size()) - 1.0;
      p[s] = dists[a.code[s] % dists.size()];
    }
    rewards.push_back(std::move(r));
    probs.push_back(std::move(p));
  }
  return make_mdp(kFamilyGamma, rewards, probs);
}

/// Calls f(action) for every action over n states.
template <class F>
void for_each_lattice_action(std::size_t n, F&& f) {
  const std::size_t rows = lattice_row_count(n);
  LatticeAction a{std::vector<std::size_t>(n, 0)};
  while (true) {
    f(a);
    std::size_t s = 0;
    while (s < n && ++a.code[s] == rows) a.code[s++] = 0;
    if (s == n) return;
  }
}

inline LatticeAction random_lattice_action(std::size_t n, std::mt19937_64& rng) {
  LatticeAction a{std::vector<std::size_t>(n)};
  for (std::size_t& c : a.code) c = rng() % lattice_row_count(n);
  return a;
}

/// Goal vector number `index` of {-1, 0, 1}^n.
inline std::vector<double> lattice_goal(std::size_t n, std::size_t index) {
  std::vector<double> g(n);
  for (std::size_t s = 0; s < n; ++s) {
    g[s] = static_cast<double>(index % 3) - 1.0;
    index /= 3;
  }
  return g;
}

struct FamilyStats {
  std::size_t mdps = 0;
  std::size_t checks = 0;
  double max_gap = 0.0;

  void merge(const FamilyStats& o) {
    mdps += o.mdps;
    checks += o.checks;
    max_gap = std::max(max_gap, o.max_gap);
  }
};

inline double value_gap(const ModelMatrix& m, const std::vector<double>& goal,
                        const std::vector<double>& expect) {
  double gap = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    gap = std::max(gap, std::abs(composed_value(m, s, goal) - expect[s]));
  }
  return gap;
}

/// Runs the joint, fixed-beta and fixed-policy solvers on one MDP and goal.
/// `variant` picks which beta and policy are held fixed.
inline void check_lattice_instance(const Mdp& mdp, const std::vector<double>& goal,
                                   std::size_t variant, FamilyStats& stats) {
  const std::size_t n = mdp.n;
  const ModelSet base = action_models(mdp);
  const ModelMatrix floor = true_value_model(mdp);
  const SubgoalSpec g{"g", ModelMatrix::value_model(goal), std::nullopt, false};
  PlannerConfig cfg;
  cfg.eps = 1e-12;

  const auto joint = optimality_iterate_option(base, g, floor, cfg);
  stats.max_gap = std::max(stats.max_gap, value_gap(joint.model(), goal, enumerate_option_values(base, goal)));

  Termination beta;
  for (std::size_t s = 0; s < n; ++s) beta.beta.push_back(((variant >> s) & 1U) ? 1.0 : 0.0);
  EnumerationScope bs;
  bs.beta = beta;
  const auto fixed_beta = optimality_iterate_beta_option(base, beta, g, floor, cfg);
  stats.max_gap =
      std::max(stats.max_gap, value_gap(fixed_beta.model(), goal, enumerate_option_values(base, goal, bs)));

  std::vector<std::size_t> choice(n);
  for (std::size_t s = 0; s < n; ++s) choice[s] = ((variant >> (s + 1)) & 1U) % base.size();
  const PolicyWeights pi = variant % 3 == 0 ? PolicyWeights::uniform(base) : PolicyWeights::deterministic(choice);
  EnumerationScope ps;
  ps.pi = pi;
  const auto fixed_pi = optimality_iterate_pi_option(base, pi, g, floor, cfg);
  stats.max_gap =
      std::max(stats.max_gap, value_gap(fixed_pi.model(), goal, enumerate_option_values(base, goal, ps)));

  ++stats.mdps;
  stats.checks += 3;
}

/// n = 1 and 2: every MDP with one or two actions, against every goal.
inline FamilyStats exhaustive_small_family(std::size_t n) {
  FamilyStats stats;
  std::size_t goals = 1;
  for (std::size_t s = 0; s < n; ++s) goals *= 3;
  std::vector<LatticeAction> all;
  for_each_lattice_action(n, [&](const LatticeAction& a) { all.push_back(a); });
  std::size_t variant = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i; j <= all.size(); ++j) {
      std::vector<LatticeAction> actions{all[i]};
      if (j < all.size()) actions.push_back(all[j]);  // j == size: single action
      const Mdp mdp = lattice_mdp(n, actions);
      for (std::size_t k = 0; k < goals; ++k) {
        FamilyStats one;
        check_lattice_instance(mdp, lattice_goal(n, k), variant++, one);
        stats.merge(one);
      }
    }
  }
  return stats;
}

/// n = 3 with one action: every MDP, one goal each.
inline FamilyStats exhaustive_single_action_family(std::size_t n) {
  FamilyStats stats;
  std::size_t goals = 1;
  for (std::size_t s = 0; s < n; ++s) goals *= 3;
  std::size_t index = 0;
  for_each_lattice_action(n, [&](const LatticeAction& a) {
    const Mdp mdp = lattice_mdp(n, {a});
    check_lattice_instance(mdp, lattice_goal(n, (index * 7) % goals), index, stats);
    ++index;
  });
  return stats;
}

/// Seeded draws from the lattice for sizes too large to enumerate.
inline FamilyStats sampled_family(std::size_t n, std::size_t actions, std::size_t count,
                                  std::uint64_t seed) {
  FamilyStats stats;
  std::mt19937_64 rng(seed);
  std::size_t goals = 1;
  for (std::size_t s = 0; s < n; ++s) goals *= 3;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<LatticeAction> as;
    for (std::size_t a = 0; a < actions; ++a) as.push_back(random_lattice_action(n, rng));
    check_lattice_instance(lattice_mdp(n, as), lattice_goal(n, rng() % goals), i, stats);
  }
  return stats;
}

}  // namespace oomi::test
