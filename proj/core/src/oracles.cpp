#include "oomi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oomi {

ValueIterationResult value_iteration_oracle(const Mdp& mdp, double eps, std::size_t max_sweeps) {
  ValueIterationResult out;
  out.value.assign(mdp.n, 0.0);
  std::vector<double> next(mdp.n, 0.0);
  while (out.sweeps < max_sweeps) {
    double change = 0.0;
    for (std::size_t s = 0; s < mdp.n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (const Action& a : mdp.actions) {
        if (!a.available[s] && !mdp.is_exit(s)) continue;
        const RowView r = a.model.row(s);
        double q = r.reward;
        for (std::size_t i = 0; i < r.cols.size(); ++i) q += r.vals[i] * out.value[r.cols[i]];
        best = std::max(best, q);
      }
      next[s] = best;
      change = std::max(change, std::abs(best - out.value[s]));
    }
    out.value.swap(next);
    ++out.sweeps;
    if (change <= eps) {
      out.converged = true;
      break;
    }
  }
  return out;
}

std::vector<double> enumerate_option_values(const ModelSet& base, const std::vector<double>& goal,
                                            const EnumerationScope& scope) {
  const std::size_t n = base.states();
  if (goal.size() != n) throw DimensionError("enumerate_option_values: goal size mismatch");
  if (n > 6) throw DomainError("enumerate_option_values: state space too large to enumerate");

  std::vector<std::vector<std::size_t>> choices(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (base.available_at(k, s)) choices[s].push_back(k);
    }
    if (choices[s].empty()) throw DomainError("enumerate_option_values: state without operators");
  }

  std::vector<PolicyWeights> policies;
  if (scope.pi) {
    policies.push_back(*scope.pi);
  } else {
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      std::vector<std::size_t> choice(n);
      for (std::size_t s = 0; s < n; ++s) choice[s] = choices[s][digit[s]];
      policies.push_back(PolicyWeights::deterministic(choice));
      std::size_t s = 0;
      while (s < n && ++digit[s] == choices[s].size()) digit[s++] = 0;
      if (s == n) break;
    }
  }

  std::vector<Termination> terminations;
  if (scope.beta) {
    terminations.push_back(*scope.beta);
  } else {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Termination t;
      for (std::size_t s = 0; s < n; ++s) t.beta.push_back((mask >> s) & 1U ? 1.0 : 0.0);
      terminations.push_back(std::move(t));
    }
  }

  SolveConfig direct;
  direct.method = SolveMethod::Direct;
  std::vector<double> best(n, -std::numeric_limits<double>::infinity());
  for (const PolicyWeights& pi : policies) {
    for (const Termination& beta : terminations) {
      ModelMatrix o;
      try {
        o = evaluate_option_model(base, pi, beta, direct);
      } catch (const DivergenceError&) {
        continue;
      }
      for (std::size_t s = 0; s < n; ++s) best[s] = std::max(best[s], composed_value(o, s, goal));
    }
  }
  return best;
}

}  // namespace oomi
