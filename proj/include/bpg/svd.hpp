#pragma once

#include <vector>

#include "bpg/block.hpp"
#include "bpg/sym_operator.hpp"

namespace bpg {

struct SvdResult {
  std::vector<double> singular_values; // descending, >= 0
  Block right_vectors;                 // k x k orthonormal
};

/// Singular values and right singular vectors of an n x k block, computed
/// from the eigendecomposition of the k x k Gram matrix. Accurate for the
/// dominant part of the spectrum; values below sqrt(eps) * sigma_1 carry
/// the squaring noise floor of the Gram matrix (see rank_by_gram).
SvdResult svd_block(const Block& b);

/// Same, with the Gram matrix taken in the inner product induced by g.
SvdResult svd_block_weighted(const Block& b, const SymOperator& g);

/// Numerical rank with the "zero" threshold applied to Gram eigenvalues:
/// lambda <= rel_tol * lambda_max counts as zero. Working on the squared
/// spectrum keeps the decision above the Gram noise floor.
int rank_by_gram(const SvdResult& s, double rel_tol = 1e-10);

/// Orthonormal basis (k x d) of the numerical null space of b's columns'
/// coefficient space: the right singular vectors whose Gram eigenvalue falls
/// below rel_tol * lambda_max.
Block null_coefficients(const Block& b, double rel_tol = 1e-10);

} // namespace bpg
