#include "bpg/cholesky.hpp"

#include <algorithm>
#include <cmath>

#include "bpg/common.hpp"

namespace bpg {

namespace {

[[noreturn]] void bad_pivot(int k, double d) {
  throw NotPositiveDefiniteError(
      "cholesky: not positive definite, pivot " + std::to_string(k) + " = " +
          std::to_string(d),
      k);
}

} // namespace

CholFactor CholFactor::factor(const SymOperator& a) {
  switch (a.storage()) {
    case Storage::Dense: return factor_dense(a);
    case Storage::Diagonal: return factor_banded(a, 0);
    case Storage::Banded: return factor_banded(a, a.bandwidth());
    case Storage::Csr: {
      const int bw = a.bandwidth();
      if (static_cast<long long>(a.dim()) * (bw + 1) > (1LL << 28))
        throw DimensionError("cholesky: CSR bandwidth too large for banded factorization");
      return factor_banded(a, bw);
    }
  }
  throw Error("cholesky: unknown storage");
}

CholFactor CholFactor::factor_banded(const SymOperator& a, int bw) {
  const int n = a.dim();
  const int stride = bw + 1;
  CholFactor f;
  f.n_ = n;
  f.bandwidth_ = bw;
  f.band_.assign(size_t(n) * stride, 0.0);

  // scatter the lower triangle of a into band storage
  a.for_each_lower([&](int i, int j, double v) {
    if (i - j > bw) throw DimensionError("cholesky: entry outside declared bandwidth");
    f.band_[size_t(i) * stride + (j - i + bw)] = v;
  });

  auto at = [&](int i, int j) -> double& { return f.band_[size_t(i) * stride + (j - i + bw)]; };

  for (int j = 0; j < n; ++j) {
    double d = at(j, j);
    const int klo = std::max(0, j - bw);
    for (int k = klo; k < j; ++k) {
      const double l = at(j, k);
      d -= l * l;
    }
    if (!(d > 0.0) || !std::isfinite(d)) bad_pivot(j, d);
    const double ljj = std::sqrt(d);
    at(j, j) = ljj;
    const int ihi = std::min(n - 1, j + bw);
    for (int i = j + 1; i <= ihi; ++i) {
      double s = at(i, j);
      const int lo = std::max({0, i - bw, j - bw});
      for (int k = lo; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / ljj;
    }
  }
  return f;
}

CholFactor CholFactor::factor_dense(const SymOperator& a) {
  const int n = a.dim();
  CholFactor f;
  f.n_ = n;
  f.dense_mode_ = true;
  f.bandwidth_ = n > 0 ? n - 1 : 0;
  const Block d = a.to_dense();
  f.dense_.assign(size_t(n) * (n + 1) / 2, 0.0);
  auto at = [&](int i, int j) -> double& { return f.dense_[size_t(i) * (i + 1) / 2 + j]; };
  for (int j = 0; j < n; ++j) {
    double diag = d(j, j);
    for (int k = 0; k < j; ++k) diag -= at(j, k) * at(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) bad_pivot(j, diag);
    const double ljj = std::sqrt(diag);
    at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = d(i, j);
      for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / ljj;
    }
  }
  return f;
}

void CholFactor::forward_solve_in_place(Block& x) const {
  if (x.rows() != n_) throw DimensionError("cholesky solve: row mismatch");
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < k; ++c) {
    double* xc = x.col(c);
    if (dense_mode_) {
      for (int i = 0; i < n_; ++i) {
        double s = xc[i];
        const double* row = dense_.data() + size_t(i) * (i + 1) / 2;
        for (int j = 0; j < i; ++j) s -= row[j] * xc[j];
        xc[i] = s / row[i];
      }
    } else {
      const int stride = bandwidth_ + 1;
      for (int i = 0; i < n_; ++i) {
        double s = xc[i];
        const int jlo = std::max(0, i - bandwidth_);
        const double* row = band_.data() + size_t(i) * stride;
        for (int j = jlo; j < i; ++j) s -= row[j - i + bandwidth_] * xc[j];
        xc[i] = s / row[bandwidth_];
      }
    }
  }
}

void CholFactor::solve_in_place(Block& x) const {
  if (x.rows() != n_) throw DimensionError("cholesky solve: row mismatch");
  forward_solve_in_place(x);
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < k; ++c) {
    double* xc = x.col(c);
    if (dense_mode_) {
      for (int i = n_ - 1; i >= 0; --i) {
        double s = xc[i];
        for (int j = i + 1; j < n_; ++j) s -= dense_[size_t(j) * (j + 1) / 2 + i] * xc[j];
        xc[i] = s / dense_[size_t(i) * (i + 1) / 2 + i];
      }
    } else {
      const int stride = bandwidth_ + 1;
      for (int i = n_ - 1; i >= 0; --i) {
        double s = xc[i];
        const int jhi = std::min(n_ - 1, i + bandwidth_);
        for (int j = i + 1; j <= jhi; ++j)
          s -= band_[size_t(j) * stride + (i - j + bandwidth_)] * xc[j];
        xc[i] = s / band_[size_t(i) * stride + bandwidth_];
      }
    }
  }
}

Block CholFactor::solve(const Block& b) const {
  Block x = b;
  solve_in_place(x);
  return x;
}

} // namespace bpg
