#pragma once

#include <vector>

#include "bpg/block.hpp"
#include "bpg/sym_operator.hpp"

namespace bpg {

/// Inner product for subspace bases: Euclidean or weighted by a positive
/// definite operator (held by reference; the operator must outlive uses).
class InnerProduct {
public:
  static InnerProduct euclidean() { return InnerProduct(nullptr); }
  static InnerProduct weighted(const SymOperator& a) { return InnerProduct(&a); }

  bool is_euclidean() const { return a_ == nullptr; }
  const SymOperator* weight() const { return a_; }

  /// G * X
  Block apply(const Block& x) const { return a_ ? a_->apply(x) : x; }
  /// X^T G Y
  Block gram(const Block& x, const Block& y) const;

private:
  explicit InnerProduct(const SymOperator* a) : a_(a) {}
  const SymOperator* a_;
};

/// An n x k basis block declared orthonormal with respect to a stated inner
/// product. Construction verifies ||B^T G B - I||_F <= 1e-10 k when invariant
/// checks are enabled (default unless NDEBUG).
class Subspace {
public:
  Subspace(Block basis, InnerProduct ip);

  int dim() const { return basis_.cols(); }
  int ambient_dim() const { return basis_.rows(); }
  const Block& basis() const { return basis_; }
  const InnerProduct& inner_product() const { return ip_; }

  /// ||B^T G B - I||_F
  double gram_error() const;

private:
  Block basis_;
  InnerProduct ip_;
};

struct OrthoOptions {
  bool allow_truncation = false;
  /// pivot threshold relative to the largest Gram diagonal; defaults to
  /// 1e-13 * n when <= 0
  double pivot_rel_tol = 0.0;
};

/// Cholesky-QR with diagonal pivoting and one reorthogonalization pass.
/// A condition guard re-factors from a shifted Gram matrix when the pivot
/// ratio indicates conditioning above ~1e7. Rank deficiency either truncates
/// (allow_truncation) or raises RankError carrying the detected rank.
Subspace orthonormalize(const Block& b, const InnerProduct& ip, OrthoOptions opts = {});

/// sin of the largest principal angle by which x leaves span(y);
/// accurate for small angles. Both subspaces must share the inner product.
double max_sin_angle(const Subspace& x, const Subspace& y);

/// cosines of principal angles between equal-inner-product subspaces
std::vector<double> principal_angle_cosines(const Subspace& x, const Subspace& y);

} // namespace bpg
