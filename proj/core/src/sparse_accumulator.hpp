#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "oomi/model.hpp"

namespace oomi::detail {

// Dense scratch row with a touched-index list. Accumulation order is the call
// order, so results are reproducible bit for bit.
class SparseAccumulator {
 public:
  explicit SparseAccumulator(std::size_t n) : values_(n, 0.0), seen_(n, 0) {}

  void add(State col, double v) {
    if (!seen_[col]) {
      seen_[col] = 1;
      touched_.push_back(col);
    }
    values_[col] += v;
  }

  void add_scaled(const RowView& row, double scale) {
    for (std::size_t i = 0; i < row.cols.size(); ++i) add(row.cols[i], scale * row.vals[i]);
  }

  // Emits the accumulated row into `b` (sorted by column) and resets.
  // Entries with magnitude at most `drop_below` are discarded.
  void flush(double reward, ModelBuilder& b, double drop_below = 0.0) {
    std::sort(touched_.begin(), touched_.end());
    cols_.clear();
    vals_.clear();
    for (State c : touched_) {
      if (std::abs(values_[c]) > drop_below) {
        cols_.push_back(c);
        vals_.push_back(values_[c]);
      }
      values_[c] = 0.0;
      seen_[c] = 0;
    }
    touched_.clear();
    b.add_row(reward, cols_, vals_);
  }

 private:
  std::vector<double> values_;
  std::vector<char> seen_;
  std::vector<State> touched_;
  std::vector<State> cols_;
  std::vector<double> vals_;
};

}  // namespace oomi::detail
