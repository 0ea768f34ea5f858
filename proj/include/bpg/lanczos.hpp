#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bpg/block.hpp"
#include "bpg/subspace.hpp"

namespace bpg {

/// Applies an operator to a single column vector held as an n x 1 Block.
using VecApply = std::function<void(const Block& x, Block& y)>;

struct LanczosOptions {
  int want_high = 0;          // converged Ritz pairs wanted at the high end
  int want_low = 0;           // ... and at the low end
  double tol = 1e-12;         // relative residual tolerance
  int max_iter = 0;           // total operator applications; 0 means 5n
  int basis_cap = 250;        // restart when the basis reaches this size
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

struct LanczosResult {
  std::vector<double> high_values;   // descending
  Block high_vectors;                // G-orthonormal columns
  std::vector<double> high_residual; // Lanczos residual estimates (G-norm, relative)
  std::vector<double> low_values;    // ascending
  Block low_vectors;
  std::vector<double> low_residual;
  int iterations = 0;
};

/// Lanczos iteration with full reorthogonalization for an operator that is
/// self-adjoint in the given inner product. Restarts with deflation against
/// converged vectors, which is what resolves multiple eigenvalues. Throws
/// ConvergenceError when the iteration budget runs out first.
LanczosResult lanczos_extreme(const VecApply& op, const InnerProduct& ip, int n,
                              const LanczosOptions& opts);

} // namespace bpg
