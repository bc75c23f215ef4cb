#include "oomi/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "sparse_accumulator.hpp"

namespace oomi {

namespace {

constexpr std::uint32_t kNoSelection = std::numeric_limits<std::uint32_t>::max();

// Change between two entries, ignoring differences within `slack` of their
// magnitude.
double entry_change(double a, double b, double slack) {
  const double d = std::abs(a - b);
  return d <= slack * std::max(std::abs(a), std::abs(b)) ? 0.0 : d;
}

double row_difference(const RowView& a, const RowView& b, double slack) {
  double diff = entry_change(a.reward, b.reward, slack);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.cols.size() || j < b.cols.size()) {
    if (j == b.cols.size() || (i < a.cols.size() && a.cols[i] < b.cols[j])) {
      diff = std::max(diff, std::abs(a.vals[i++]));
    } else if (i == a.cols.size() || b.cols[j] < a.cols[i]) {
      diff = std::max(diff, std::abs(b.vals[j++]));
    } else {
      diff = std::max(diff, entry_change(a.vals[i++], b.vals[j++], slack));
    }
  }
  return diff;
}

std::vector<char> initiation_mask(const SubgoalSpec& spec, std::size_t n) {
  if (!spec.initiation) return {};
  std::vector<char> mask(n, 0);
  for (State s : *spec.initiation) mask[s] = 1;
  return mask;
}

// How the option continues after the base step lands in state k.
enum class Continuation {
  Optimal,  // continue iff the current model is worth more than stopping in k
  Fixed,    // continue with probability 1 - beta[k]
};

struct Task {
  std::string name;
  std::vector<double> goal;
  std::vector<char> initiation;  // empty: every state
  Continuation continuation = Continuation::Optimal;
  const Termination* beta = nullptr;
};

struct Sweep {
  double residual = 0.0;
  std::uint64_t rows_recomputed = 0;
  std::uint64_t rows_in_changed_models = 0;
  bool any_changed = false;
};

ExperimentReport tally(std::size_t n, const std::vector<Sweep>& sweeps, const PlannerConfig& cfg) {
  ExperimentReport r;
  r.n = n;
  r.eps = cfg.threshold();
  r.count_mode = cfg.count_mode;
  r.sweeps = sweeps.size();
  for (std::size_t k = 0; k < sweeps.size(); ++k) {
    r.per_iteration_residuals.push_back(sweeps[k].residual);
    if (cfg.count_mode == CountMode::Recompute) {
      r.iterations = k + 1;
      r.backups_total += sweeps[k].rows_recomputed;
    } else {
      if (sweeps[k].any_changed) r.iterations = k + 1;
      r.backups_total += sweeps[k].rows_in_changed_models;
    }
  }
  r.backups_per_state = n == 0 ? 0.0 : static_cast<double>(r.backups_total) / static_cast<double>(n);
  return r;
}

// Jacobi iteration of one or more option models against their subgoals.
class ModelIteration {
 public:
  ModelIteration(const ModelSet& base, bool learned_candidates, std::vector<Task> tasks,
                 const ModelMatrix& floor, const PlannerConfig& cfg)
      : base_(base),
        learned_(learned_candidates),
        tasks_(std::move(tasks)),
        cfg_(cfg),
        n_(floor.size()),
        acc_(floor.size()) {
    validate(cfg);
    if (base_.empty()) throw DomainError("model iteration: empty base set");
    if (base_.states() != n_) throw DimensionError("model iteration: base/floor size mismatch");
    for (const Task& t : tasks_) {
      if (t.goal.size() != n_) throw DimensionError("model iteration: subgoal size mismatch");
      if (t.beta && t.beta->size() != n_) throw DimensionError("model iteration: beta size mismatch");
    }
    models_.assign(tasks_.size(), floor);
    selection_.assign(tasks_.size(), std::vector<std::uint32_t>(n_, kNoSelection));
    frozen_.assign(tasks_.size(), 0);
    cont_.resize(n_);
    value_.resize(n_);
    base_avail_ptr_.push_back(0);
    for (std::size_t s = 0; s < n_; ++s) {
      for (std::size_t k = 0; k < base_.size(); ++k) {
        if (base_.available_at(k, s)) base_avail_.push_back(static_cast<std::uint32_t>(k));
      }
      base_avail_ptr_.push_back(base_avail_.size());
    }
  }

  ExperimentReport run() {
    std::vector<Sweep> sweeps;
    std::vector<ModelMatrix> next(tasks_.size());
    std::vector<double> residual(tasks_.size(), 0.0);
    bool done = tasks_.empty();
    while (!done && sweeps.size() < cfg_.max_iters) {
      Sweep sweep;
      for (std::size_t g = 0; g < tasks_.size(); ++g) {
        if (frozen_[g]) continue;
        next[g] = update(g, residual[g]);
        const std::uint64_t rows = rows_in_initiation(g);
        sweep.rows_recomputed += rows;
        sweep.residual = std::max(sweep.residual, residual[g]);
        if (residual[g] > cfg_.threshold()) {
          sweep.any_changed = true;
          sweep.rows_in_changed_models += rows;
        }
      }
      done = true;
      for (std::size_t g = 0; g < tasks_.size(); ++g) {
        if (frozen_[g]) continue;
        models_[g] = std::move(next[g]);
        if (residual[g] <= cfg_.threshold()) {
          frozen_[g] = 1;
        } else {
          done = false;
        }
      }
      sweeps.push_back(sweep);
    }

    ExperimentReport report = tally(n_, sweeps, cfg_);
    report.converged = done;
    for (std::size_t g = 0; g < tasks_.size(); ++g) {
      report.model_names.push_back(tasks_[g].name);
      report.model_converged.push_back(frozen_[g]);
    }
    report.models = std::move(models_);
    return report;
  }

 private:
  bool in_initiation(std::size_t g, std::size_t s) const {
    return tasks_[g].initiation.empty() || tasks_[g].initiation[s] != 0;
  }

  std::uint64_t rows_in_initiation(std::size_t g) const {
    const auto& mask = tasks_[g].initiation;
    if (mask.empty()) return n_;
    return static_cast<std::uint64_t>(std::count(mask.begin(), mask.end(), char{1}));
  }

  const ModelMatrix& candidate(std::size_t k) const {
    return k < base_.size() ? base_[k] : models_[k - base_.size()];
  }

  bool candidate_available(std::size_t k, std::size_t s) const {
    return k >= base_.size() || base_.available_at(k, s);
  }

  // Continuation weights and the per-successor value of the best way to
  // proceed after one base step.
  void prepare(std::size_t g) {
    const Task& t = tasks_[g];
    const ModelMatrix& current = models_[g];
    for (std::size_t k = 0; k < n_; ++k) {
      const double stop = t.goal[k];
      const double go = composed_value(current, k, t.goal);
      if (t.continuation == Continuation::Optimal) {
        const bool cont = go > stop + cfg_.tie.margin;
        cont_[k] = cont ? 1.0 : 0.0;
        value_[k] = cont ? go : stop;
      } else {
        const double b = t.beta->beta[k];
        cont_[k] = 1.0 - b;
        value_[k] = b * stop + (1.0 - b) * go;
      }
    }
  }

  ModelMatrix update(std::size_t g, double& residual) {
    prepare(g);
    const ModelMatrix& current = models_[g];
    std::vector<std::uint32_t>& sel = selection_[g];
    ModelBuilder b(n_);
    b.reserve(current.nonzeros());
    residual = 0.0;

    for (std::size_t s = 0; s < n_; ++s) {
      if (!in_initiation(g, s)) {
        b.add_row(current.row(s));
        continue;
      }
      std::size_t best_k = kNoSelection;
      double best = 0.0;
      if (sel[s] != kNoSelection && candidate_available(sel[s], s)) {
        best_k = sel[s];
        best = composed_value(candidate(best_k), s, value_);
      }
      const auto consider = [&](std::size_t k, double v) {
        if (best_k == kNoSelection || v > best + cfg_.tie.margin) {
          best_k = k;
          best = v;
        }
      };
      for (std::size_t i = base_avail_ptr_[s]; i < base_avail_ptr_[s + 1]; ++i) {
        const std::size_t k = base_avail_[i];
        if (k != best_k) consider(k, composed_value(base_[k], s, value_));
      }
      if (learned_) {
        const std::size_t offset = base_.size();
        for (std::size_t m = 0; m < models_.size(); ++m) {
          if (m + offset != best_k) consider(m + offset, composed_value(models_[m], s, value_));
        }
      }
      if (best_k == kNoSelection) {
        throw DomainError("model iteration: no available candidate in state " + std::to_string(s));
      }
      sel[s] = static_cast<std::uint32_t>(best_k);

      const RowView first = candidate(best_k).row(s);
      bool continues = false;
      for (State k : first.cols) continues = continues || cont_[k] != 0.0;
      if (!continues) {
        b.add_row(first);
      } else {
        double reward = first.reward;
        for (std::size_t i = 0; i < first.cols.size(); ++i) {
          const State k = first.cols[i];
          const double p = first.vals[i];
          const double c = cont_[k];
          if (c != 1.0) acc_.add(k, p * (1.0 - c));
          if (c != 0.0) {
            const RowView tail = current.row(k);
            reward += p * c * tail.reward;
            acc_.add_scaled(tail, p * c);
          }
        }
        acc_.flush(reward, b, cfg_.prune);
      }
      residual = std::max(residual, row_difference(b.last_row(), current.row(s), cfg_.slack()));
    }
    return std::move(b).finish();
  }

  const ModelSet& base_;
  bool learned_;
  std::vector<Task> tasks_;
  PlannerConfig cfg_;
  std::size_t n_;
  std::vector<ModelMatrix> models_;
  std::vector<std::vector<std::uint32_t>> selection_;
  std::vector<char> frozen_;
  std::vector<double> cont_;
  std::vector<double> value_;
  detail::SparseAccumulator acc_;
  // Base members available in each state, CSR layout.
  std::vector<std::uint32_t> base_avail_;
  std::vector<std::size_t> base_avail_ptr_;
};

Task make_task(const SubgoalSpec& spec, std::size_t n) {
  validate(spec);
  if (spec.g.size() != n) throw DimensionError("subgoal '" + spec.name + "' has wrong size");
  Task t;
  t.name = spec.name;
  t.goal.assign(spec.g.rewards().begin(), spec.g.rewards().end());
  t.initiation = initiation_mask(spec, n);
  return t;
}

}  // namespace

std::string to_string(CountMode mode) {
  return mode == CountMode::Changed ? "changed" : "recompute";
}

CountMode count_mode_from_string(const std::string& name) {
  if (name == "changed") return CountMode::Changed;
  if (name == "recompute") return CountMode::Recompute;
  throw DomainError("unknown count mode '" + name + "'");
}

void validate(const PlannerConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw DomainError("PlannerConfig: eps must be positive");
  if (cfg.max_iters < 1) throw DomainError("PlannerConfig: max_iters must be at least 1");
  if (!(cfg.prune >= 0.0)) throw DomainError("PlannerConfig: prune must be non-negative");
}

ExperimentReport optimality_iterate_value(const ModelSet& base, const ModelMatrix& floor,
                                          const PlannerConfig& cfg) {
  validate(cfg);
  if (base.empty()) throw DomainError("optimality_iterate_value: empty base set");
  const std::size_t n = floor.size();
  if (base.states() != n) throw DimensionError("optimality_iterate_value: dimension mismatch");

  // Flatten the available rows of every state into one contiguous program so
  // a sweep streams through memory once.
  struct Candidate {
    double reward;
    std::uint32_t end;  // one past the last entry
  };
  std::vector<std::uint32_t> state_end(n);
  std::vector<Candidate> cands;
  std::vector<State> cols;
  std::vector<double> vals;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (!base.available_at(k, s)) continue;
      const RowView r = base[k].row(s);
      cols.insert(cols.end(), r.cols.begin(), r.cols.end());
      vals.insert(vals.end(), r.vals.begin(), r.vals.end());
      cands.push_back({r.reward, static_cast<std::uint32_t>(cols.size())});
    }
    if (cands.size() == (s == 0 ? 0 : state_end[s - 1])) {
      throw DomainError("optimality_iterate_value: no available model in state " +
                        std::to_string(s));
    }
    state_end[s] = static_cast<std::uint32_t>(cands.size());
  }

  std::vector<double> v(floor.rewards().begin(), floor.rewards().end());
  std::vector<double> next(n);
  std::vector<Sweep> sweeps;
  const double slack = cfg.slack();
  bool done = false;
  while (!done && sweeps.size() < cfg.max_iters) {
    Sweep sweep;
    std::uint32_t c = 0;
    std::uint32_t e = 0;
    double residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (; c < state_end[s]; ++c) {
        double value = cands[c].reward;
        for (; e < cands[c].end; ++e) value += vals[e] * v[cols[e]];
        best = std::max(best, value);
      }
      next[s] = best;
      residual = std::max(residual, entry_change(best, v[s], slack));
    }
    sweep.residual = residual;
    v.swap(next);
    sweep.rows_recomputed = n;
    sweep.any_changed = sweep.residual > cfg.threshold();
    sweep.rows_in_changed_models = sweep.any_changed ? n : 0;
    done = !sweep.any_changed;
    sweeps.push_back(sweep);
  }
  ExperimentReport report = tally(n, sweeps, cfg);
  report.converged = done;
  report.models.push_back(ModelMatrix::value_model(std::move(v)));
  report.model_names.emplace_back("value");
  report.model_converged.push_back(done);
  return report;
}

ExperimentReport optimality_iterate_option(const ModelSet& base, const SubgoalSpec& g,
                                           const ModelMatrix& floor, const PlannerConfig& cfg) {
  std::vector<Task> tasks{make_task(g, floor.size())};
  return ModelIteration(base, false, std::move(tasks), floor, cfg).run();
}

ExperimentReport optimality_iterate_beta_option(const ModelSet& base, const Termination& beta,
                                                const SubgoalSpec& g, const ModelMatrix& floor,
                                                const PlannerConfig& cfg) {
  for (double b : beta.beta) {
    if (!(b >= 0.0 && b <= 1.0)) throw DomainError("optimality_iterate_beta_option: beta outside [0,1]");
  }
  Task t = make_task(g, floor.size());
  t.continuation = Continuation::Fixed;
  t.beta = &beta;
  std::vector<Task> tasks{std::move(t)};
  return ModelIteration(base, false, std::move(tasks), floor, cfg).run();
}

ExperimentReport optimality_iterate_pi_option(const ModelSet& base, const PolicyWeights& pi,
                                              const SubgoalSpec& g, const ModelMatrix& floor,
                                              const PlannerConfig& cfg) {
  const ModelSet fixed(std::vector<ModelMatrix>{expectation_model(pi, base)});
  std::vector<Task> tasks{make_task(g, floor.size())};
  return ModelIteration(fixed, false, std::move(tasks), floor, cfg).run();
}

ExperimentReport oomi(const ModelSet& base, const std::vector<SubgoalSpec>& subgoals,
                      const ModelMatrix& floor, const PlannerConfig& cfg) {
  if (subgoals.empty()) throw DomainError("oomi: no subgoals");
  std::vector<Task> tasks;
  tasks.reserve(subgoals.size());
  for (const SubgoalSpec& g : subgoals) tasks.push_back(make_task(g, floor.size()));
  return ModelIteration(base, true, std::move(tasks), floor, cfg).run();
}

ExperimentReport aopmi(const Mdp& mdp, const std::vector<SubgoalSpec>& subgoals,
                       const PlannerConfig& cfg) {
  if (subgoals.empty()) throw DomainError("aopmi: no subgoals");
  const ModelSet actions = action_models(mdp);
  const ModelMatrix floor = true_value_model(mdp);

  std::vector<Task> tasks;
  std::vector<const SubgoalSpec*> option_specs;
  for (const SubgoalSpec& g : subgoals) {
    if (g.true_value) continue;
    tasks.push_back(make_task(g, mdp.n));
    option_specs.push_back(&g);
  }
  ExperimentReport intra;
  if (!tasks.empty()) {
    intra = ModelIteration(actions, false, std::move(tasks), floor, cfg).run();
  } else {
    intra.converged = true;
  }

  ModelSet planning;
  for (std::size_t i = 0; i < intra.models.size(); ++i) {
    planning.add(std::move(intra.models[i]), initiation_mask(*option_specs[i], mdp.n));
  }
  for (std::size_t a = 0; a < actions.size(); ++a) {
    planning.add(actions.models[a], actions.available[a]);
  }
  ExperimentReport inter = optimality_iterate_value(planning, floor, cfg);

  ExperimentReport report;
  report.n = mdp.n;
  report.eps = cfg.threshold();
  report.count_mode = cfg.count_mode;
  report.iterations = intra.iterations + inter.iterations;
  report.sweeps = intra.sweeps + inter.sweeps;
  report.backups_total = intra.backups_total + inter.backups_total;
  report.backups_per_state =
      static_cast<double>(report.backups_total) / static_cast<double>(mdp.n);
  report.per_iteration_residuals = intra.per_iteration_residuals;
  report.per_iteration_residuals.insert(report.per_iteration_residuals.end(),
                                        inter.per_iteration_residuals.begin(),
                                        inter.per_iteration_residuals.end());
  report.converged = intra.converged && inter.converged;
  report.models = std::move(inter.models);
  report.model_names = {"value"};
  report.model_converged = {static_cast<char>(report.converged)};
  return report;
}

std::size_t true_value_index(const std::vector<SubgoalSpec>& subgoals) {
  for (std::size_t i = 0; i < subgoals.size(); ++i) {
    if (subgoals[i].true_value) return i;
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace oomi
