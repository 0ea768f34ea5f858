#include "bpg/kernels.hpp"

#include <algorithm>

#include "bpg/common.hpp"

namespace bpg::kernels {

namespace {

// Shared per-entry helpers. Keeping a single definition of each inner loop
// guarantees the serial and OpenMP variants sum in the same order.

inline double dot_n(int n, const double* a, const double* b) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double row_times_col(const Block& x, int i, const Block& c, int j) {
  double s = 0.0;
  for (int t = 0; t < x.cols(); ++t) s += x(i, t) * c(t, j);
  return s;
}

inline double dense_sym_row(int n, const double* packed_lower, const double* xc, int i) {
  // row i of the symmetric matrix stored as a packed lower triangle
  double s = 0.0;
  const double* row_i = packed_lower + size_t(i) * (i + 1) / 2;
  for (int j = 0; j <= i; ++j) s += row_i[j] * xc[j];
  for (int j = i + 1; j < n; ++j) s += packed_lower[size_t(j) * (j + 1) / 2 + i] * xc[j];
  return s;
}

inline double csr_row(const int* ptr, const int* idx, const double* val,
                      const double* xc, int i) {
  double s = 0.0;
  for (int t = ptr[i]; t < ptr[i + 1]; ++t) s += val[t] * xc[idx[t]];
  return s;
}

inline double banded_sym_row(int n, int bw, const double* band, const double* xc, int i) {
  // lower bands stored row-major with bw+1 slots per row; entry (i,j) for
  // j in [i-bw, i] sits at band[i*(bw+1) + (j-i+bw)]
  const int stride = bw + 1;
  double s = 0.0;
  const int jlo = std::max(0, i - bw);
  const double* row_i = band + size_t(i) * stride;
  for (int j = jlo; j <= i; ++j) s += row_i[j - i + bw] * xc[j];
  const int jhi = std::min(n - 1, i + bw);
  for (int j = i + 1; j <= jhi; ++j) s += band[size_t(j) * stride + (i - j + bw)] * xc[j];
  return s;
}

void check_same_shape(const Block& a, const Block& b, const char* who) {
  if (!a.same_shape(b)) throw DimensionError(std::string(who) + ": shape mismatch");
}

void check_apply_shapes(int n, const Block& x, Block& y, const char* who) {
  if (x.rows() != n) throw DimensionError(std::string(who) + ": operand rows != n");
  if (!y.same_shape(x)) y = Block(x.rows(), x.cols());
}

} // namespace

// ---------------------------------------------------------------- parallel

Block gram(const Block& x, const Block& z) {
  if (x.rows() != z.rows()) throw DimensionError("gram: row mismatch");
  const int kx = x.cols(), kz = z.cols(), n = x.rows();
  Block g(kx, kz);
#pragma omp parallel for collapse(2) schedule(static)
  for (int a = 0; a < kx; ++a)
    for (int b = 0; b < kz; ++b) g(a, b) = dot_n(n, x.col(a), z.col(b));
  return g;
}

Block multiply(const Block& x, const Block& c) {
  if (x.cols() != c.rows()) throw DimensionError("multiply: inner dimension mismatch");
  Block y(x.rows(), c.cols());
  const int n = x.rows(), m = c.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) y(i, j) = row_times_col(x, i, c, j);
  return y;
}

Block add_scaled(double alpha, const Block& x, double beta, const Block& z) {
  check_same_shape(x, z, "add_scaled");
  Block y(x.rows(), x.cols());
  const int n = x.rows(), k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) y(i, j) = alpha * x(i, j) + beta * z(i, j);
  return y;
}

void scale_cols(Block& x, const std::vector<double>& d) {
  if (static_cast<int>(d.size()) != x.cols()) throw DimensionError("scale_cols: size mismatch");
  const int n = x.rows(), k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) x(i, j) *= d[j];
}

Block residual(const Block& mx, const Block& ax, const std::vector<double>& theta) {
  check_same_shape(mx, ax, "residual");
  if (static_cast<int>(theta.size()) != mx.cols())
    throw DimensionError("residual: theta size mismatch");
  Block r(mx.rows(), mx.cols());
  const int n = mx.rows(), k = mx.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) r(i, j) = mx(i, j) - ax(i, j) * theta[j];
  return r;
}

Block diag_combine(const Block& x, const std::vector<double>& theta, const Block& w) {
  check_same_shape(x, w, "diag_combine");
  if (static_cast<int>(theta.size()) != x.cols())
    throw DimensionError("diag_combine: theta size mismatch");
  Block u(x.rows(), x.cols());
  const int n = x.rows(), k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) u(i, j) = x(i, j) * theta[j] + w(i, j);
  return u;
}

void dense_sym_apply(int n, const double* packed_lower, const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "dense_sym_apply");
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) y(i, j) = dense_sym_row(n, packed_lower, x.col(j), i);
}

void diag_apply(int n, const double* d, const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "diag_apply");
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) y(i, j) = d[i] * x(i, j);
}

void csr_full_apply(int n, const int* ptr, const int* idx, const double* val,
                    const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "csr_full_apply");
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) y(i, j) = csr_row(ptr, idx, val, x.col(j), i);
}

void banded_sym_apply(int n, int bw, const double* band, const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "banded_sym_apply");
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) y(i, j) = banded_sym_row(n, bw, band, x.col(j), i);
}

// ----------------------------------------------------------------- serial

namespace serial {

Block gram(const Block& x, const Block& z) {
  if (x.rows() != z.rows()) throw DimensionError("gram: row mismatch");
  const int kx = x.cols(), kz = z.cols(), n = x.rows();
  Block g(kx, kz);
  for (int a = 0; a < kx; ++a)
    for (int b = 0; b < kz; ++b) g(a, b) = dot_n(n, x.col(a), z.col(b));
  return g;
}

Block multiply(const Block& x, const Block& c) {
  if (x.cols() != c.rows()) throw DimensionError("multiply: inner dimension mismatch");
  Block y(x.rows(), c.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j) y(i, j) = row_times_col(x, i, c, j);
  return y;
}

Block add_scaled(double alpha, const Block& x, double beta, const Block& z) {
  check_same_shape(x, z, "add_scaled");
  Block y(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) y(i, j) = alpha * x(i, j) + beta * z(i, j);
  return y;
}

Block residual(const Block& mx, const Block& ax, const std::vector<double>& theta) {
  check_same_shape(mx, ax, "residual");
  if (static_cast<int>(theta.size()) != mx.cols())
    throw DimensionError("residual: theta size mismatch");
  Block r(mx.rows(), mx.cols());
  for (int i = 0; i < mx.rows(); ++i)
    for (int j = 0; j < mx.cols(); ++j) r(i, j) = mx(i, j) - ax(i, j) * theta[j];
  return r;
}

Block diag_combine(const Block& x, const std::vector<double>& theta, const Block& w) {
  check_same_shape(x, w, "diag_combine");
  if (static_cast<int>(theta.size()) != x.cols())
    throw DimensionError("diag_combine: theta size mismatch");
  Block u(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) u(i, j) = x(i, j) * theta[j] + w(i, j);
  return u;
}

void dense_sym_apply(int n, const double* packed_lower, const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "dense_sym_apply");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < x.cols(); ++j) y(i, j) = dense_sym_row(n, packed_lower, x.col(j), i);
}

void diag_apply(int n, const double* d, const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "diag_apply");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < x.cols(); ++j) y(i, j) = d[i] * x(i, j);
}

void csr_full_apply(int n, const int* ptr, const int* idx, const double* val,
                    const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "csr_full_apply");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < x.cols(); ++j) y(i, j) = csr_row(ptr, idx, val, x.col(j), i);
}

void banded_sym_apply(int n, int bw, const double* band, const Block& x, Block& y) {
  check_apply_shapes(n, x, y, "banded_sym_apply");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < x.cols(); ++j) y(i, j) = banded_sym_row(n, bw, band, x.col(j), i);
}

} // namespace serial

} // namespace bpg::kernels
