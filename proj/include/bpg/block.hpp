#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bpg/common.hpp"

namespace bpg {

/// Column-major dense block of doubles. Used both for tall subspace bases
/// (n x k with small k) and for small square matrices (Gram matrices,
/// projected problems, rotation accumulators).
class Block {
public:
  Block() = default;
  Block(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw DimensionError("Block: negative dimension");
  }

  static Block identity(int n, int k) {
    Block b(n, k);
    for (int j = 0; j < k && j < n; ++j) b(j, j) = 1.0;
    return b;
  }

  /// Row-major initializer, convenient in tests: Block::from_rows({{1,2},{3,4}}).
  static Block from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(int i, int j) { return data_[size_t(j) * rows_ + i]; }
  double operator()(int i, int j) const { return data_[size_t(j) * rows_ + i]; }

  double* col(int j) { return data_.data() + size_t(j) * rows_; }
  const double* col(int j) const { return data_.data() + size_t(j) * rows_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  /// Copy of columns [j0, j0+k).
  Block sub_cols(int j0, int k) const;

  /// Horizontal concatenation [*this, other].
  Block hcat(const Block& other) const;

  bool same_shape(const Block& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

} // namespace bpg
