#pragma once

#include <vector>

#include "bpg/sym_operator.hpp"

namespace bpg {

/// Incomplete Cholesky with threshold dropping. The factorization is
/// column-oriented; a computed entry l_ij is kept only when
/// |l_ij| >= droptol * ||column j of A||_2, and diagonal entries are never
/// dropped. A non-positive pivot triggers one retry with the diagonal
/// shifted by 1e-3 * max diag(A) before giving up.
class IcFactor {
public:
  static IcFactor factor(const SymOperator& a, double droptol);

  int dim() const { return n_; }
  long nonzeros() const;
  double applied_shift() const { return shift_; }

  /// x <- (L L^T)^{-1} x, columnwise
  void solve_in_place(Block& x) const;
  Block solve(const Block& b) const;

private:
  IcFactor() = default;
  static IcFactor try_factor(const SymOperator& a, double droptol, double shift);

  int n_ = 0;
  double shift_ = 0.0;
  // columns of L: diagonal separate, strictly-lower entries per column
  std::vector<double> diag_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<double>> vals_;
};

} // namespace bpg
