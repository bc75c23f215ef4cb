#include "oomi/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparse_accumulator.hpp"

namespace oomi {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Rasp Rasp::deterministic(std::size_t n, std::size_t s) {
  if (s >= n) throw DimensionError("Rasp::deterministic: state out of range");
  Rasp x;
  x.dist.assign(n, 0.0);
  x.dist[s] = 1.0;
  return x;
}

ModelMatrix ModelMatrix::identity(std::size_t n) {
  ModelBuilder b(n);
  b.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const State c = static_cast<State>(s);
    const double one = 1.0;
    b.add_row(0.0, std::span<const State>(&c, 1), std::span<const double>(&one, 1));
  }
  return std::move(b).finish();
}

ModelMatrix ModelMatrix::value_model(std::vector<double> reward) {
  ModelMatrix m;
  m.row_ptr_.assign(reward.size() + 1, 0);
  m.reward_ = std::move(reward);
  return m;
}

ModelMatrix ModelMatrix::constant_value(std::size_t n, double value) {
  return value_model(std::vector<double>(n, value));
}

ModelMatrix ModelMatrix::from_dense(std::vector<double> reward,
                                    const std::vector<std::vector<double>>& trans) {
  const std::size_t n = reward.size();
  require_same_size(trans.size(), n, "ModelMatrix::from_dense");
  ModelBuilder b(n);
  std::vector<State> cols;
  std::vector<double> vals;
  for (std::size_t s = 0; s < n; ++s) {
    require_same_size(trans[s].size(), n, "ModelMatrix::from_dense");
    cols.clear();
    vals.clear();
    for (std::size_t t = 0; t < n; ++t) {
      if (trans[s][t] != 0.0) {
        cols.push_back(static_cast<State>(t));
        vals.push_back(trans[s][t]);
      }
    }
    b.add_row(reward[s], cols, vals);
  }
  return std::move(b).finish();
}

double ModelMatrix::trans(std::size_t s, std::size_t t) const {
  const RowView r = row(s);
  const auto it = std::lower_bound(r.cols.begin(), r.cols.end(), static_cast<State>(t));
  if (it == r.cols.end() || *it != t) return 0.0;
  return r.vals[static_cast<std::size_t>(it - r.cols.begin())];
}

double ModelMatrix::row_sum(std::size_t s) const {
  double sum = 0.0;
  for (double v : row(s).vals) sum += v;
  return sum;
}

Rasp ModelMatrix::row_rasp(std::size_t s) const {
  Rasp x;
  x.reward = reward_[s];
  x.dist.assign(size(), 0.0);
  const RowView r = row(s);
  for (std::size_t i = 0; i < r.cols.size(); ++i) x.dist[r.cols[i]] = r.vals[i];
  return x;
}

std::vector<std::vector<double>> ModelMatrix::dense_trans() const {
  std::vector<std::vector<double>> d(size(), std::vector<double>(size(), 0.0));
  for (std::size_t s = 0; s < size(); ++s) {
    const RowView r = row(s);
    for (std::size_t i = 0; i < r.cols.size(); ++i) d[s][r.cols[i]] = r.vals[i];
  }
  return d;
}

ModelBuilder::ModelBuilder(std::size_t n) : n_(n) {
  m_.reward_.reserve(n);
  m_.row_ptr_.reserve(n + 1);
}

void ModelBuilder::reserve(std::size_t nonzeros) {
  m_.cols_.reserve(nonzeros);
  m_.vals_.reserve(nonzeros);
}

void ModelBuilder::add_row(double reward, std::span<const State> cols,
                           std::span<const double> vals) {
  if (m_.reward_.size() >= n_) throw DimensionError("ModelBuilder: too many rows");
  if (cols.size() != vals.size()) throw DimensionError("ModelBuilder: cols/vals mismatch");
  m_.reward_.push_back(reward);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] >= n_) throw DimensionError("ModelBuilder: column out of range");
    if (i > 0 && cols[i] <= cols[i - 1]) throw DomainError("ModelBuilder: columns not increasing");
    if (vals[i] == 0.0) continue;
    m_.cols_.push_back(cols[i]);
    m_.vals_.push_back(vals[i]);
  }
  m_.row_ptr_.push_back(m_.cols_.size());
}

void ModelBuilder::add_empty_row(double reward) {
  add_row(reward, std::span<const State>{}, std::span<const double>{});
}

ModelMatrix ModelBuilder::finish() && {
  if (m_.reward_.size() != n_) throw DimensionError("ModelBuilder: missing rows");
  return std::move(m_);
}

void validate_substochastic(const ModelMatrix& m) {
  for (std::size_t s = 0; s < m.size(); ++s) {
    const RowView r = m.row(s);
    if (!std::isfinite(r.reward)) {
      throw DomainError("model row " + std::to_string(s) + " has a non-finite reward");
    }
    double sum = 0.0;
    for (double v : r.vals) {
      if (!(v >= 0.0)) throw DomainError("model row " + std::to_string(s) + " has a negative entry");
      sum += v;
    }
    if (sum > 1.0 + kRowSumTolerance) {
      throw DomainError("model row " + std::to_string(s) + " sums to " + std::to_string(sum));
    }
  }
}

double max_abs_difference(const ModelMatrix& a, const ModelMatrix& b) {
  require_same_size(a.size(), b.size(), "max_abs_difference");
  double diff = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const RowView ra = a.row(s);
    const RowView rb = b.row(s);
    diff = std::max(diff, std::abs(ra.reward - rb.reward));
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ra.cols.size() || j < rb.cols.size()) {
      if (j == rb.cols.size() || (i < ra.cols.size() && ra.cols[i] < rb.cols[j])) {
        diff = std::max(diff, std::abs(ra.vals[i++]));
      } else if (i == ra.cols.size() || rb.cols[j] < ra.cols[i]) {
        diff = std::max(diff, std::abs(rb.vals[j++]));
      } else {
        diff = std::max(diff, std::abs(ra.vals[i++] - rb.vals[j++]));
      }
    }
  }
  return diff;
}

ModelSet::ModelSet(std::vector<ModelMatrix> ms)
    : models(std::move(ms)), available(models.size()) {}

void ModelSet::add(ModelMatrix m, std::vector<char> mask) {
  if (!models.empty()) require_same_size(m.size(), states(), "ModelSet::add");
  if (!mask.empty()) require_same_size(mask.size(), m.size(), "ModelSet::add");
  models.push_back(std::move(m));
  available.push_back(std::move(mask));
}

PolicyWeights::PolicyWeights(std::vector<std::vector<Entry>> per_state)
    : per_state_(std::move(per_state)) {
  for (std::size_t s = 0; s < per_state_.size(); ++s) {
    double total = 0.0;
    for (const auto& [k, w] : per_state_[s]) {
      if (!(w >= 0.0)) throw DomainError("PolicyWeights: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw DomainError("PolicyWeights: weights at state " + std::to_string(s) +
                        " sum to " + std::to_string(total));
    }
  }
}

PolicyWeights PolicyWeights::deterministic(const std::vector<std::size_t>& choice) {
  std::vector<std::vector<Entry>> w(choice.size());
  for (std::size_t s = 0; s < choice.size(); ++s) w[s] = {{choice[s], 1.0}};
  return PolicyWeights(std::move(w));
}

PolicyWeights PolicyWeights::uniform(const ModelSet& set) {
  std::vector<std::vector<Entry>> w(set.states());
  for (std::size_t s = 0; s < set.states(); ++s) {
    std::vector<std::size_t> avail;
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (set.available_at(k, s)) avail.push_back(k);
    }
    if (avail.empty()) throw DomainError("PolicyWeights::uniform: no operator in a state");
    for (std::size_t k : avail) w[s].emplace_back(k, 1.0 / static_cast<double>(avail.size()));
  }
  return PolicyWeights(std::move(w));
}

ModelMatrix compose(const ModelMatrix& m1, const ModelMatrix& m2) {
  require_same_size(m1.size(), m2.size(), "compose");
  const std::size_t n = m1.size();
  ModelBuilder b(n);
  detail::SparseAccumulator acc(n);
  for (std::size_t s = 0; s < n; ++s) {
    const RowView r1 = m1.row(s);
    double reward = r1.reward;
    for (std::size_t i = 0; i < r1.cols.size(); ++i) {
      const RowView r2 = m2.row(r1.cols[i]);
      reward += r1.vals[i] * r2.reward;
      acc.add_scaled(r2, r1.vals[i]);
    }
    acc.flush(reward, b);
  }
  return std::move(b).finish();
}

Rasp apply(const Rasp& x, const ModelMatrix& m) {
  require_same_size(x.size(), m.size(), "apply");
  Rasp out;
  out.reward = x.reward;
  out.dist.assign(m.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double p = x.dist[k];
    if (p == 0.0) continue;
    const RowView r = m.row(k);
    out.reward += p * r.reward;
    for (std::size_t i = 0; i < r.cols.size(); ++i) out.dist[r.cols[i]] += p * r.vals[i];
  }
  return out;
}

ModelMatrix expectation_model(const PolicyWeights& weights, const ModelSet& models) {
  const std::size_t n = models.states();
  require_same_size(weights.size(), n, "expectation_model");
  ModelBuilder b(n);
  detail::SparseAccumulator acc(n);
  for (std::size_t s = 0; s < n; ++s) {
    double reward = 0.0;
    for (const auto& [k, w] : weights.at(s)) {
      if (k >= models.size()) {
        throw DomainError("expectation_model: weight references missing model " +
                          std::to_string(k));
      }
      if (w == 0.0) continue;
      if (!models.available_at(k, s)) {
        throw DomainError("expectation_model: model " + std::to_string(k) +
                          " is unavailable in state " + std::to_string(s));
      }
      const RowView r = models[k].row(s);
      reward += w * r.reward;
      acc.add_scaled(r, w);
    }
    acc.flush(reward, b);
  }
  return std::move(b).finish();
}

ModelMatrix termination_model(const Termination& beta, const ModelMatrix& m) {
  require_same_size(beta.size(), m.size(), "termination_model");
  const std::size_t n = m.size();
  ModelBuilder b(n);
  detail::SparseAccumulator acc(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double bs = beta.beta[s];
    if (!(bs >= 0.0 && bs <= 1.0)) {
      throw DomainError("termination_model: beta[" + std::to_string(s) + "] outside [0,1]");
    }
    const RowView r = m.row(s);
    const double keep = 1.0 - bs;
    if (bs == 0.0) {
      b.add_row(r);
      continue;
    }
    acc.add(static_cast<State>(s), bs);
    if (keep != 0.0) acc.add_scaled(r, keep);
    acc.flush(keep * r.reward, b);
  }
  return std::move(b).finish();
}

ModelMatrix max_value_model(std::span<const ModelMatrix> values) {
  if (values.empty()) throw DomainError("max_value_model: empty set");
  std::vector<double> best(values.front().rewards().begin(), values.front().rewards().end());
  for (const ModelMatrix& v : values) {
    require_same_size(v.size(), best.size(), "max_value_model");
    if (!v.is_value_model()) throw DomainError("max_value_model: operand is not a value model");
    for (std::size_t s = 0; s < best.size(); ++s) best[s] = std::max(best[s], v.reward(s));
  }
  return ModelMatrix::value_model(std::move(best));
}

ArgmaxResult argmax_model(const ModelSet& ms, const ModelMatrix& v, TieRule tie) {
  if (ms.empty()) throw DomainError("argmax_model: empty set");
  const std::size_t n = ms.states();
  require_same_size(v.size(), n, "argmax_model");
  for (const ModelMatrix& m : ms.models) require_same_size(m.size(), n, "argmax_model");

  ArgmaxResult out;
  out.selection.assign(n, 0);
  ModelBuilder b(n);
  for (std::size_t s = 0; s < n; ++s) {
    bool found = false;
    double best = 0.0;
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (!ms.available_at(k, s)) continue;
      const double value = composed_value(ms[k], s, v.rewards());
      if (!found || value > best + tie.margin) {
        found = true;
        best = value;
        out.selection[s] = k;
      }
    }
    if (!found) throw DomainError("argmax_model: no available model in state " + std::to_string(s));
    b.add_row(ms[out.selection[s]].row(s));
  }
  out.model = std::move(b).finish();
  return out;
}

}  // namespace oomi
