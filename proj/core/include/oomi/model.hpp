#pragma once

// Rasps and models in homogeneous coordinates.
//
// A model is the (1+n)x(1+n) block matrix [1 0; R P]. The top row is never
// stored: a ModelMatrix keeps the reward column R and the transition block P,
// the latter in compressed sparse row form so that deterministic domains with
// hundreds of thousands of states stay small.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oomi {

using State = std::uint32_t;

/// Tolerance on substochastic row sums. Rows are never renormalized.
inline constexpr double kRowSumTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on the number of states, or an index is out of range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument violates the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Reward scalar plus a discounted distribution over states.
struct Rasp {
  double reward = 0.0;
  std::vector<double> dist;

  /// The deterministic rasp in state s with zero reward.
  static Rasp deterministic(std::size_t n, std::size_t s);

  std::size_t size() const { return dist.size(); }
};

/// Read-only view of one row of a model.
struct RowView {
  double reward = 0.0;
  std::span<const State> cols;
  std::span<const double> vals;

  std::size_t nonzeros() const { return cols.size(); }
};

class ModelBuilder;

/// Reward vector plus discounted substochastic transition matrix.
///
/// A value model is a ModelMatrix with no stored transitions.
class ModelMatrix {
 public:
  ModelMatrix() = default;

  /// Zero reward, identity transitions.
  static ModelMatrix identity(std::size_t n);
  /// Reward vector with an all-zero transition block.
  static ModelMatrix value_model(std::vector<double> reward);
  /// Constant value model.
  static ModelMatrix constant_value(std::size_t n, double value);
  /// Builds from a dense transition block; exact zeros are dropped.
  static ModelMatrix from_dense(std::vector<double> reward,
                                const std::vector<std::vector<double>>& trans);

  std::size_t size() const { return reward_.size(); }
  std::size_t nonzeros() const { return vals_.size(); }
  bool is_value_model() const { return vals_.empty(); }

  double reward(std::size_t s) const { return reward_[s]; }
  std::span<const double> rewards() const { return reward_; }

  RowView row(std::size_t s) const {
    const auto b = row_ptr_[s];
    const auto e = row_ptr_[s + 1];
    return {reward_[s], std::span<const State>(cols_).subspan(b, e - b),
            std::span<const double>(vals_).subspan(b, e - b)};
  }

  /// Entry P[s][t], zero when not stored.
  double trans(std::size_t s, std::size_t t) const;
  double row_sum(std::size_t s) const;
  Rasp row_rasp(std::size_t s) const;
  std::vector<std::vector<double>> dense_trans() const;

  friend bool operator==(const ModelMatrix&, const ModelMatrix&) = default;

 private:
  friend class ModelBuilder;

  std::vector<double> reward_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<State> cols_;
  std::vector<double> vals_;
};

/// Appends rows in order; call finish() after exactly n rows.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::size_t n);

  /// Entries must be sorted by column; exact zeros are skipped.
  void add_row(double reward, std::span<const State> cols,
               std::span<const double> vals);
  void add_row(const RowView& row) { add_row(row.reward, row.cols, row.vals); }
  void add_empty_row(double reward);
  void reserve(std::size_t nonzeros);

  std::size_t rows_added() const { return m_.reward_.size(); }
  /// The most recently added row.
  RowView last_row() const { return m_.row(rows_added() - 1); }
  ModelMatrix finish() &&;

 private:
  std::size_t n_;
  ModelMatrix m_;
};

/// Throws DomainError if a transition is negative or a row sum exceeds
/// 1 + kRowSumTolerance.
void validate_substochastic(const ModelMatrix& m);

/// Maximum absolute entrywise difference over rewards and transitions.
double max_abs_difference(const ModelMatrix& a, const ModelMatrix& b);

/// Per-state termination probabilities.
struct Termination {
  std::vector<double> beta;

  static Termination constant(std::size_t n, double b) {
    return {std::vector<double>(n, b)};
  }
  std::size_t size() const { return beta.size(); }
};

/// An indexed collection of models where each model may be undefined on some
/// rows (an action that is not legal in a state, for example).
struct ModelSet {
  std::vector<ModelMatrix> models;
  /// Per model; an empty mask means every row is available.
  std::vector<std::vector<char>> available;

  ModelSet() = default;
  ModelSet(std::vector<ModelMatrix> ms);  // NOLINT(google-explicit-constructor)

  void add(ModelMatrix m, std::vector<char> mask = {});
  std::size_t size() const { return models.size(); }
  bool empty() const { return models.empty(); }
  /// Number of states; zero for an empty set.
  std::size_t states() const { return models.empty() ? 0 : models.front().size(); }
  bool available_at(std::size_t k, std::size_t s) const {
    return available[k].empty() || available[k][s] != 0;
  }
  const ModelMatrix& operator[](std::size_t k) const { return models[k]; }
};

/// Per-state distribution over the members of a ModelSet.
class PolicyWeights {
 public:
  using Entry = std::pair<std::size_t, double>;

  PolicyWeights() = default;
  explicit PolicyWeights(std::vector<std::vector<Entry>> per_state);

  /// Point mass on choice[s] in every state.
  static PolicyWeights deterministic(const std::vector<std::size_t>& choice);
  /// Uniform over the operators available in each state.
  static PolicyWeights uniform(const ModelSet& set);

  std::size_t size() const { return per_state_.size(); }
  std::span<const Entry> at(std::size_t s) const { return per_state_[s]; }

 private:
  std::vector<std::vector<Entry>> per_state_;
};

/// Incumbent-keeping tie rule for argmax: a later candidate displaces the
/// current best only when it improves the composed reward by more than
/// `margin`.
struct TieRule {
  double margin = 1e-12;
};

/// Model composition: [R1 + P1 R2 | P1 P2].
ModelMatrix compose(const ModelMatrix& m1, const ModelMatrix& m2);

/// Rasp application: [r + p R | p P].
Rasp apply(const Rasp& x, const ModelMatrix& m);

/// Row s is the weights(s, .) mixture of the rows s of the member models.
ModelMatrix expectation_model(const PolicyWeights& weights, const ModelSet& models);

/// Row s is beta[s] * (row s of I) + (1 - beta[s]) * (row s of m).
ModelMatrix termination_model(const Termination& beta, const ModelMatrix& m);

/// Elementwise maximum of value models.
ModelMatrix max_value_model(std::span<const ModelMatrix> values);

struct ArgmaxResult {
  ModelMatrix model;
  std::vector<std::size_t> selection;
};

/// For each state, selects the available member whose composition with `v`
/// has the largest reward. Only rewards take part in the comparison.
ArgmaxResult argmax_model(const ModelSet& ms, const ModelMatrix& v, TieRule tie = {});

/// Reward of apply(s_s, compose(m, v)) without building the composition.
inline double composed_value(const ModelMatrix& m, std::size_t s, std::span<const double> v) {
  const RowView r = m.row(s);
  double value = r.reward;
  for (std::size_t i = 0; i < r.cols.size(); ++i) value += r.vals[i] * v[r.cols[i]];
  return value;
}

}  // namespace oomi
