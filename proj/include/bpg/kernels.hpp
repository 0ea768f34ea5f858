#pragma once

#include <vector>

#include "bpg/block.hpp"

namespace bpg::kernels {

// Data-parallel block kernels. The default entry points parallelize with
// OpenMP over rows (mat-vec style kernels) or over output entries (Gram
// style reductions); the bpg::kernels::serial namespace holds the plain-loop
// reference implementations used by the tests and the benchmark.
//
// Both variants call the same per-row / per-entry helpers, so for a given
// input they produce bitwise identical results, independent of the number
// of threads.

/// Y = X^T * Z, shapes (n x kx)^T (n x kz) -> (kx x kz).
Block gram(const Block& x, const Block& z);

/// Y = X * C, shapes (n x k)(k x m) -> (n x m).
Block multiply(const Block& x, const Block& c);

/// Y = alpha*X + beta*Z (same shapes).
Block add_scaled(double alpha, const Block& x, double beta, const Block& z);

/// Scale column j of X by d[j], in place.
void scale_cols(Block& x, const std::vector<double>& d);

/// R = MX - AX * diag(theta); the residual of a Ritz block.
Block residual(const Block& mx, const Block& ax, const std::vector<double>& theta);

/// U = X * diag(theta) + W; the preconditioned update block.
Block diag_combine(const Block& x, const std::vector<double>& theta, const Block& w);

/// Symmetric mat-vec kernels on blocks; storage layouts match SymOperator.
void dense_sym_apply(int n, const double* packed_lower, const Block& x, Block& y);
void diag_apply(int n, const double* d, const Block& x, Block& y);
void csr_full_apply(int n, const int* ptr, const int* idx, const double* val,
                    const Block& x, Block& y);
void banded_sym_apply(int n, int bw, const double* band, const Block& x, Block& y);

namespace serial {

Block gram(const Block& x, const Block& z);
Block multiply(const Block& x, const Block& c);
Block add_scaled(double alpha, const Block& x, double beta, const Block& z);
Block residual(const Block& mx, const Block& ax, const std::vector<double>& theta);
Block diag_combine(const Block& x, const std::vector<double>& theta, const Block& w);
void dense_sym_apply(int n, const double* packed_lower, const Block& x, Block& y);
void diag_apply(int n, const double* d, const Block& x, Block& y);
void csr_full_apply(int n, const int* ptr, const int* idx, const double* val,
                    const Block& x, Block& y);
void banded_sym_apply(int n, int bw, const double* band, const Block& x, Block& y);

} // namespace serial

} // namespace bpg::kernels
