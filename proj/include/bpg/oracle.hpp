#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bpg/cholesky.hpp"
#include "bpg/problems.hpp"
#include "bpg/subspace.hpp"

namespace bpg {

/// Reference eigenvalues, with eigenvectors for the leading part of the
/// spectrum, used as ground truth by the bound machinery and the tests.
/// Values are the leading eigenvalues in the declared orientation
/// (descending mu of (M, A) unless stated otherwise); mu_min always holds
/// the opposite-end extreme so distance ratios can be formed even when the
/// spectrum is partial.
struct Spectrum {
  std::vector<double> values;     // leading eigenvalues
  bool descending = true;
  double mu_min = 0.0;            // the eigenvalue at the far end
  int n_total = 0;
  Block vectors;                  // leading eigenvectors, columns
  std::vector<double> residuals;  // certificates ||M w - mu A w|| / ||A w||

  /// 1-based access matching the usual index convention
  double value(int i) const { return values.at(size_t(i) - 1); }
  int leading_count() const { return static_cast<int>(values.size()); }
};

/// Full spectrum of the pair (M, A) by Cholesky reduction and Jacobi;
/// A-orthonormal eigenvectors, descending values. Dense path, n <= 2000.
Spectrum dense_reference(const SymOperator& m, const SymOperator& a);

/// Exact spectrum for a diagonal M with A = I: sorted diagonal entries and
/// coordinate-vector eigenvectors for the leading k indices.
Spectrum diagonal_reference(const SymOperator& m_diag, int keep_vectors);

/// Leading eigenpairs of (M, A) through Lanczos on A^{-1} M in the A-inner
/// product, with full reorthogonalization and deflation restarts. mu_min is
/// filled from a separate short run at the opposite end. Vectors come back
/// A-orthonormal with residual certificates.
Spectrum pair_reference(const SymOperator& m, const SymOperator& a, const CholFactor& a_chol,
                        int k, double tol = 1e-12);

/// Extreme eigenpairs of a single operator (identity inner product):
/// orientation "largest" or "smallest" via plain Lanczos on op itself.
Spectrum operator_extreme(const SymOperator& op, int k, bool largest, double tol = 1e-12);

/// `index,value,residual` CSV; a final row carries mu_min under index n.
void write_spectrum_csv(const Spectrum& sp, const std::string& path);
Spectrum read_spectrum_csv(const std::string& path);

} // namespace bpg
