#include "bpg/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"
#include "bpg/svd.hpp"

#ifndef NDEBUG
#define BPG_CHECK_SUBSPACE 1
#endif
#ifdef BPG_FORCE_SUBSPACE_CHECKS
#define BPG_CHECK_SUBSPACE 1
#endif

namespace bpg {

Block InnerProduct::gram(const Block& x, const Block& y) const {
  return a_ ? kernels::gram(x, a_->apply(y)) : kernels::gram(x, y);
}

Subspace::Subspace(Block basis, InnerProduct ip) : basis_(std::move(basis)), ip_(ip) {
#ifdef BPG_CHECK_SUBSPACE
  if (!basis_.empty()) {
    const double err = gram_error();
    if (!(err <= 1e-10 * std::max(1, basis_.cols())))
      throw Error("Subspace: basis fails orthonormality check, error " + std::to_string(err));
  }
#endif
}

double Subspace::gram_error() const {
  const Block g = ip_.gram(basis_, basis_);
  double s = 0.0;
  for (int j = 0; j < g.cols(); ++j)
    for (int i = 0; i < g.rows(); ++i) {
      const double d = g(i, j) - (i == j ? 1.0 : 0.0);
      s += d * d;
    }
  return std::sqrt(s);
}

namespace {

struct PivotedChol {
  Block l;                // r x r lower triangular factor of the permuted Gram
  std::vector<int> perm;  // selected original column for each factor column
  int rank = 0;
  double cond_estimate = 1.0;
};

// Diagonal-pivoted Cholesky of a symmetric positive semidefinite matrix;
// stops when the largest remaining diagonal falls below tol_abs.
PivotedChol pivoted_cholesky(Block g, double tol_abs) {
  const int k = g.rows();
  PivotedChol out;
  out.perm.resize(k);
  std::iota(out.perm.begin(), out.perm.end(), 0);
  Block l(k, k);

  double first_pivot = 0.0, last_pivot = 0.0;
  int r = 0;
  for (; r < k; ++r) {
    int p = r;
    for (int j = r + 1; j < k; ++j)
      if (g(out.perm[j], out.perm[j]) > g(out.perm[p], out.perm[p])) p = j;
    std::swap(out.perm[r], out.perm[p]);
    // swap already-computed factor rows to match the permutation
    for (int t = 0; t < r; ++t) std::swap(l(r, t), l(p, t));
    const int pr = out.perm[r];
    double d = g(pr, pr);
    for (int t = 0; t < r; ++t) d -= l(r, t) * l(r, t);
    if (!(d > tol_abs) || !std::isfinite(d)) break;
    const double lrr = std::sqrt(d);
    l(r, r) = lrr;
    if (r == 0) first_pivot = d;
    last_pivot = d;
    for (int i = r + 1; i < k; ++i) {
      double s = g(out.perm[i], pr);
      for (int t = 0; t < r; ++t) s -= l(i, t) * l(r, t);
      l(i, r) = s / lrr;
    }
    // fold the pivot's contribution out of the trailing diagonal
    for (int i = r + 1; i < k; ++i)
      g(out.perm[i], out.perm[i]) -= l(i, r) * l(i, r);
  }
  out.rank = r;
  out.l = std::move(l);
  out.cond_estimate = (last_pivot > 0.0) ? std::sqrt(first_pivot / last_pivot) : 0.0;
  return out;
}

// Q = B(:, perm(0..r-1)) * L^{-T}, columnwise forward pass.
Block right_solve_lt(const Block& b, const std::vector<int>& perm, const Block& l, int r) {
  const int n = b.rows();
  Block q(n, r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < n; ++i) q(i, j) = b(i, perm[j]);
    for (int t = 0; t < j; ++t) {
      const double c = l(j, t);
      if (c == 0.0) continue;
      for (int i = 0; i < n; ++i) q(i, j) -= c * q(i, t);
    }
    const double inv = 1.0 / l(j, j);
    for (int i = 0; i < n; ++i) q(i, j) *= inv;
  }
  return q;
}

} // namespace

Subspace orthonormalize(const Block& b, const InnerProduct& ip, OrthoOptions opts) {
  if (b.cols() == 0) return Subspace(Block(b.rows(), 0), ip);
  if (b.cols() > b.rows())
    throw DimensionError("orthonormalize: more columns than rows");

  const int n = b.rows();
  const int k = b.cols();
  const double rel = opts.pivot_rel_tol > 0.0 ? opts.pivot_rel_tol : 1e-13 * n;

  Block gram = ip.gram(b, b);
  double max_diag = 0.0;
  for (int j = 0; j < k; ++j) max_diag = std::max(max_diag, gram(j, j));
  if (!(max_diag > 0.0)) {
    if (opts.allow_truncation) return Subspace(Block(n, 0), ip);
    throw RankError("orthonormalize: zero block", 0);
  }
  const double tol_abs = rel * max_diag;

  PivotedChol pc = pivoted_cholesky(gram, tol_abs);
  if (pc.rank < k && !opts.allow_truncation)
    throw RankError("orthonormalize: numerical rank " + std::to_string(pc.rank) +
                        " < " + std::to_string(k),
                    pc.rank);

  if (pc.cond_estimate > 1e7 || pc.rank == 0) {
    // shifted-Gram retry for badly conditioned blocks
    Block shifted = gram;
    const double shift = 1e-14 * n * max_diag;
    for (int j = 0; j < k; ++j) shifted(j, j) += shift;
    PivotedChol pc2 = pivoted_cholesky(shifted, tol_abs);
    if (pc2.rank >= pc.rank) pc = std::move(pc2);
  }

  Block q = right_solve_lt(b, pc.perm, pc.l, pc.rank);

  // one reorthogonalization pass: plain Cholesky of the new Gram
  Block g2 = ip.gram(q, q);
  const int r = pc.rank;
  Block l2(r, r);
  bool ok = true;
  for (int j = 0; j < r && ok; ++j) {
    double d = g2(j, j);
    for (int t = 0; t < j; ++t) d -= l2(j, t) * l2(j, t);
    if (!(d > 0.0) || !std::isfinite(d)) {
      ok = false;
      break;
    }
    l2(j, j) = std::sqrt(d);
    for (int i = j + 1; i < r; ++i) {
      double s = g2(i, j);
      for (int t = 0; t < j; ++t) s -= l2(i, t) * l2(j, t);
      l2(i, j) = s / l2(j, j);
    }
  }
  if (ok) {
    std::vector<int> id(r);
    std::iota(id.begin(), id.end(), 0);
    q = right_solve_lt(q, id, l2, r);
  } else {
    // fall back to a recursive pass on the already improved basis
    return orthonormalize(q, ip, opts);
  }
  return Subspace(std::move(q), ip);
}

double max_sin_angle(const Subspace& x, const Subspace& y) {
  if (x.ambient_dim() != y.ambient_dim())
    throw DimensionError("max_sin_angle: ambient dimension mismatch");
  if (x.dim() == 0) return 0.0;
  if (y.dim() == 0) return 1.0;
  // residual of projecting x onto y in the shared inner product
  const Block coeff = y.inner_product().gram(y.basis(), x.basis()); // ky x kx
  const Block proj = kernels::multiply(y.basis(), coeff);
  const Block res = kernels::add_scaled(1.0, x.basis(), -1.0, proj);
  if (x.inner_product().is_euclidean()) {
    const SvdResult s = svd_block(res);
    return s.singular_values.empty() ? 0.0 : s.singular_values.front();
  }
  const SvdResult s = svd_block_weighted(res, *x.inner_product().weight());
  return s.singular_values.empty() ? 0.0 : s.singular_values.front();
}

std::vector<double> principal_angle_cosines(const Subspace& x, const Subspace& y) {
  const Block cross = x.inner_product().gram(x.basis(), y.basis());
  SvdResult s = svd_block(cross);
  for (double& v : s.singular_values) v = std::min(v, 1.0);
  return s.singular_values;
}

} // namespace bpg
