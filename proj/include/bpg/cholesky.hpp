#pragma once

#include <vector>

#include "bpg/sym_operator.hpp"

namespace bpg {

/// Cholesky factorization A = L L^T for positive definite operators.
/// Diagonal and banded inputs factor in banded form; dense inputs in packed
/// dense form; CSR inputs are converted to banded form at their natural
/// bandwidth. No fill-reducing reordering is attempted.
class CholFactor {
public:
  static CholFactor factor(const SymOperator& a);

  int dim() const { return n_; }
  int bandwidth() const { return bandwidth_; }

  /// Solve A x = b columnwise, in place.
  void solve_in_place(Block& x) const;
  Block solve(const Block& b) const;

  /// Solve L y = b (forward substitution only), in place.
  void forward_solve_in_place(Block& x) const;

  double diag(int i) const {
    return dense_mode_ ? dense_[size_t(i) * (i + 1) / 2 + i]
                       : band_[size_t(i) * (bandwidth_ + 1) + bandwidth_];
  }

private:
  CholFactor() = default;
  static CholFactor factor_banded(const SymOperator& a, int bw);
  static CholFactor factor_dense(const SymOperator& a);

  int n_ = 0;
  int bandwidth_ = 0;
  bool dense_mode_ = false;
  std::vector<double> band_;   // lower bands of L
  std::vector<double> dense_;  // packed lower L
};

} // namespace bpg
