#include "oomi/mdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace oomi {

namespace {

constexpr double kDivergenceMagnitude = 1e300;

Eigen::MatrixXd dense(const ModelMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t s = 0; s < m.size(); ++s) {
    const RowView r = m.row(s);
    for (std::size_t i = 0; i < r.cols.size(); ++i) {
      d(static_cast<Eigen::Index>(s), r.cols[i]) = r.vals[i];
    }
  }
  return d;
}

Eigen::VectorXd rewards(const ModelMatrix& m) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(m.size()));
  for (std::size_t s = 0; s < m.size(); ++s) r(static_cast<Eigen::Index>(s)) = m.reward(s);
  return r;
}

Eigen::FullPivLU<Eigen::MatrixXd> factor(const Eigen::MatrixXd& a, const char* op) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw DivergenceError(std::string(op) +
                          ": singular system, the policy does not reach an exit");
  }
  return lu;
}

}  // namespace

std::vector<std::size_t> Mdp::available_actions(std::size_t s) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (actions[a].available[s]) out.push_back(a);
  }
  return out;
}

std::vector<std::size_t> Mdp::exit_states() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (exit[s]) out.push_back(s);
  }
  return out;
}

void validate(const Mdp& mdp) {
  if (!(mdp.gamma >= 0.0 && mdp.gamma <= 1.0)) throw DomainError("Mdp: gamma outside [0,1]");
  if (mdp.exit.size() != mdp.n) throw DimensionError("Mdp: exit mask has wrong size");
  if (mdp.actions.empty()) throw DomainError("Mdp: no actions");
  for (const Action& a : mdp.actions) {
    if (a.model.size() != mdp.n || a.available.size() != mdp.n) {
      throw DimensionError("Mdp: action '" + a.id + "' has wrong size");
    }
    for (std::size_t s = 0; s < mdp.n; ++s) {
      const RowView r = a.model.row(s);
      if (!std::isfinite(r.reward)) {
        throw DomainError("Mdp: action '" + a.id + "' has a non-finite reward");
      }
      double sum = 0.0;
      for (double v : r.vals) {
        if (!(v >= 0.0)) throw DomainError("Mdp: action '" + a.id + "' has a negative entry");
        sum += v;
      }
      if (mdp.is_exit(s)) {
        if (!r.cols.empty()) {
          throw DomainError("Mdp: exit state " + std::to_string(s) + " has transitions");
        }
      } else if (a.available[s] && std::abs(sum - mdp.gamma) > kRowSumTolerance) {
        throw DomainError("Mdp: action '" + a.id + "' row " + std::to_string(s) +
                          " sums to " + std::to_string(sum) + ", expected gamma");
      }
    }
  }
  for (std::size_t s = 0; s < mdp.n; ++s) {
    if (!mdp.is_exit(s) && mdp.available_actions(s).empty()) {
      throw DomainError("Mdp: state " + std::to_string(s) + " has no available action");
    }
  }
}

ModelSet action_models(const Mdp& mdp) {
  ModelSet set;
  for (const Action& a : mdp.actions) {
    std::vector<char> mask = a.available;
    bool all = true;
    for (std::size_t s = 0; s < mdp.n; ++s) {
      if (mdp.is_exit(s)) mask[s] = 1;
      all = all && mask[s];
    }
    if (all) mask.clear();
    set.add(a.model, std::move(mask));
  }
  return set;
}

ModelMatrix true_value_model(const Mdp& mdp, const TrueValueOptions& opts) {
  if (!(opts.margin > 0.0)) throw DomainError("true_value_model: margin must be positive");
  double min_reward = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  bool positive_recurrent = false;
  for (const Action& a : mdp.actions) {
    for (std::size_t s = 0; s < mdp.n; ++s) {
      if (!a.available[s] && !mdp.is_exit(s)) continue;
      const double r = a.model.reward(s);
      min_reward = std::min(min_reward, r);
      max_abs = std::max(max_abs, std::abs(r));
      if (r > 0.0 && !mdp.is_exit(s)) positive_recurrent = true;
    }
  }
  if (!std::isfinite(min_reward)) min_reward = 0.0;
  double floor_bound = 0.0;
  if (mdp.gamma < 1.0) {
    // Exits cut the reward stream short, so positive rewards never lower the bound.
    floor_bound = std::min(0.0, min_reward) / (1.0 - mdp.gamma);
  } else {
    if (positive_recurrent) {
      throw ConfigError("true_value_model: gamma = 1 with positive rewards outside exits");
    }
    const double horizon = opts.horizon.value_or(10.0 * static_cast<double>(mdp.n));
    floor_bound = -max_abs * horizon;
  }
  return ModelMatrix::constant_value(mdp.n, floor_bound - opts.margin);
}

ModelMatrix evaluate_policy_model(const ModelSet& base, const PolicyWeights& pi,
                                  const SolveConfig& cfg) {
  const ModelMatrix e = expectation_model(pi, base);
  const std::size_t n = e.size();
  if (cfg.method == SolveMethod::Direct) {
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -
        dense(e);
    const Eigen::VectorXd v = factor(a, "evaluate_policy_model").solve(rewards(e));
    return ModelMatrix::value_model(std::vector<double>(v.data(), v.data() + v.size()));
  }

  std::vector<double> v(n, 0.0);
  std::vector<double> next(n, 0.0);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    double change = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      next[s] = composed_value(e, s, v);
      change = std::max(change, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (!(change < kDivergenceMagnitude)) break;
    if (change <= cfg.eps) return ModelMatrix::value_model(std::move(v));
  }
  throw DivergenceError("evaluate_policy_model: no convergence within max_iters");
}

ModelMatrix evaluate_option_model(const ModelSet& base, const PolicyWeights& pi,
                                  const Termination& beta, const SolveConfig& cfg) {
  const ModelMatrix e = expectation_model(pi, base);
  const std::size_t n = e.size();
  if (beta.size() != n) throw DimensionError("evaluate_option_model: dimension mismatch");
  for (double b : beta.beta) {
    if (!(b >= 0.0 && b <= 1.0)) throw DomainError("evaluate_option_model: beta outside [0,1]");
  }

  if (cfg.method == SolveMethod::Direct) {
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd stop(ni);
    for (std::size_t s = 0; s < n; ++s) stop(static_cast<Eigen::Index>(s)) = beta.beta[s];
    const Eigen::MatrixXd pe = dense(e);
    const Eigen::VectorXd keep = Eigen::VectorXd::Ones(ni) - stop;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(ni, ni) - pe * keep.asDiagonal();
    const auto lu = factor(a, "evaluate_option_model");
    const Eigen::VectorXd r = lu.solve(rewards(e));
    const Eigen::MatrixXd p = lu.solve(pe * stop.asDiagonal());
    std::vector<double> rv(r.data(), r.data() + r.size());
    std::vector<std::vector<double>> pv(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        // Clamp round-off so the result stays a valid substochastic model.
        const double x = p(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t));
        pv[s][t] = std::abs(x) < 1e-15 ? 0.0 : x;
      }
    }
    return ModelMatrix::from_dense(std::move(rv), pv);
  }

  ModelMatrix m = ModelMatrix::constant_value(n, 0.0);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    ModelMatrix next = compose(e, termination_model(beta, m));
    const double change = max_abs_difference(next, m);
    m = std::move(next);
    if (!(change < kDivergenceMagnitude)) break;
    if (change <= cfg.eps) return m;
  }
  throw DivergenceError("evaluate_option_model: no convergence within max_iters");
}

void validate(const SubgoalSpec& spec) {
  if (!spec.g.is_value_model()) {
    throw DomainError("SubgoalSpec '" + spec.name + "': g must be a value model");
  }
  if (spec.initiation) {
    for (State s : *spec.initiation) {
      if (s >= spec.g.size()) {
        throw DimensionError("SubgoalSpec '" + spec.name + "': initiation state out of range");
      }
    }
  }
}

}  // namespace oomi
