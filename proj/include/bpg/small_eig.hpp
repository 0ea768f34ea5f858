#pragma once

#include <vector>

#include "bpg/block.hpp"

namespace bpg {

struct SmallEig {
  std::vector<double> values; // descending
  Block vectors;              // columns, orthonormal (G-orthonormal in the pair case)
};

/// Eigendecomposition of a dense symmetric k x k matrix by cyclic Jacobi.
/// Values descending; ties keep the stable order of the sweep.
SmallEig sym_eig_small(const Block& s);

/// Generalized pair (S, G) with G positive definite: S C = G C diag(theta).
/// Reduced to a standard problem through the Cholesky factor of G; the
/// returned vectors are G-orthonormal.
SmallEig sym_eig_small(const Block& s, const Block& g);

} // namespace bpg
