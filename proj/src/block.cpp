#include "bpg/block.hpp"

namespace bpg {

Block Block::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int m = static_cast<int>(rows.size());
  const int n = m > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  Block b(m, n);
  int i = 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n)
      throw DimensionError("Block::from_rows: ragged rows");
    int j = 0;
    for (double v : r) b(i, j++) = v;
    ++i;
  }
  return b;
}

Block Block::sub_cols(int j0, int k) const {
  if (j0 < 0 || k < 0 || j0 + k > cols_)
    throw DimensionError("Block::sub_cols: column range out of bounds");
  Block out(rows_, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < rows_; ++i) out(i, j) = (*this)(i, j0 + j);
  return out;
}

Block Block::hcat(const Block& other) const {
  if (other.empty()) return *this;
  if (empty()) return other;
  if (rows_ != other.rows_) throw DimensionError("Block::hcat: row mismatch");
  Block out(rows_, cols_ + other.cols_);
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) out(i, j) = (*this)(i, j);
  for (int j = 0; j < other.cols_; ++j)
    for (int i = 0; i < rows_; ++i) out(i, cols_ + j) = other(i, j);
  return out;
}

} // namespace bpg
