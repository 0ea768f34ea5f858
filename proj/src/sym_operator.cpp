#include "bpg/sym_operator.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"

namespace bpg {

SymOperator SymOperator::identity(int n) {
  return diagonal(std::vector<double>(n, 1.0), Definiteness::PositiveDefinite);
}

SymOperator SymOperator::diagonal(std::vector<double> d, Definiteness hint) {
  SymOperator op;
  op.n_ = static_cast<int>(d.size());
  op.storage_ = Storage::Diagonal;
  op.hint_ = hint;
  op.diag_ = std::move(d);
  return op;
}

SymOperator SymOperator::dense_lower(int n, std::vector<double> packed, Definiteness hint) {
  if (static_cast<long>(packed.size()) != static_cast<long>(n) * (n + 1) / 2)
    throw DimensionError("dense_lower: packed size != n(n+1)/2");
  SymOperator op;
  op.n_ = n;
  op.storage_ = Storage::Dense;
  op.hint_ = hint;
  op.dense_ = std::move(packed);
  return op;
}

SymOperator SymOperator::dense_from(const Block& full, Definiteness hint) {
  if (full.rows() != full.cols()) throw DimensionError("dense_from: not square");
  const int n = full.rows();
  std::vector<double> packed(size_t(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) packed[size_t(i) * (i + 1) / 2 + j] = full(i, j);
  return dense_lower(n, std::move(packed), hint);
}

SymOperator SymOperator::csr_upper(int n, std::vector<int> row_ptr, std::vector<int> col_idx,
                                   std::vector<double> val, Definiteness hint) {
  if (static_cast<int>(row_ptr.size()) != n + 1)
    throw DimensionError("csr_upper: row_ptr size != n+1");
  if (col_idx.size() != val.size()) throw DimensionError("csr_upper: index/value size mismatch");
  for (int i = 0; i < n; ++i) {
    int prev = -1;
    for (int t = row_ptr[i]; t < row_ptr[i + 1]; ++t) {
      if (col_idx[t] < i || col_idx[t] >= n)
        throw DimensionError("csr_upper: column index outside upper triangle");
      if (col_idx[t] <= prev)
        throw DimensionError("csr_upper: column indices not strictly increasing");
      prev = col_idx[t];
    }
  }
  SymOperator op;
  op.n_ = n;
  op.storage_ = Storage::Csr;
  op.hint_ = hint;
  op.csr_ptr_ = std::move(row_ptr);
  op.csr_idx_ = std::move(col_idx);
  op.csr_val_ = std::move(val);
  op.build_csr_mirror();
  return op;
}

SymOperator SymOperator::banded(int n, int bandwidth, std::vector<double> bands,
                                Definiteness hint) {
  if (bandwidth < 0 || bandwidth >= n)
    throw DimensionError("banded: bandwidth out of range");
  if (bands.size() != size_t(n) * (bandwidth + 1))
    throw DimensionError("banded: storage size != n*(bw+1)");
  SymOperator op;
  op.n_ = n;
  op.storage_ = Storage::Banded;
  op.hint_ = hint;
  op.bandwidth_ = bandwidth;
  op.band_ = std::move(bands);
  return op;
}

void SymOperator::build_csr_mirror() {
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(csr_val_.size() * 2);
  for (int i = 0; i < n_; ++i)
    for (int t = csr_ptr_[i]; t < csr_ptr_[i + 1]; ++t) {
      const int j = csr_idx_[t];
      trip.emplace_back(i, j, csr_val_[t]);
      if (j != i) trip.emplace_back(j, i, csr_val_[t]);
    }
  std::sort(trip.begin(), trip.end());
  adj_ptr_.assign(n_ + 1, 0);
  adj_idx_.resize(trip.size());
  adj_val_.resize(trip.size());
  for (const auto& [i, j, v] : trip) adj_ptr_[i + 1]++;
  for (int i = 0; i < n_; ++i) adj_ptr_[i + 1] += adj_ptr_[i];
  size_t t = 0;
  for (const auto& [i, j, v] : trip) {
    adj_idx_[t] = j;
    adj_val_[t] = v;
    ++t;
  }
}

int SymOperator::bandwidth() const {
  switch (storage_) {
    case Storage::Diagonal: return 0;
    case Storage::Banded: return bandwidth_;
    case Storage::Dense: return n_ > 0 ? n_ - 1 : 0;
    case Storage::Csr: {
      int bw = 0;
      for (int i = 0; i < n_; ++i)
        for (int t = csr_ptr_[i]; t < csr_ptr_[i + 1]; ++t)
          bw = std::max(bw, csr_idx_[t] - i);
      return bw;
    }
  }
  return 0;
}

void SymOperator::apply(const Block& x, Block& y) const {
  if (x.cols() < 1) throw DimensionError("apply: block has no columns");
  switch (storage_) {
    case Storage::Dense: kernels::dense_sym_apply(n_, dense_.data(), x, y); break;
    case Storage::Diagonal: kernels::diag_apply(n_, diag_.data(), x, y); break;
    case Storage::Csr:
      kernels::csr_full_apply(n_, adj_ptr_.data(), adj_idx_.data(), adj_val_.data(), x, y);
      break;
    case Storage::Banded: kernels::banded_sym_apply(n_, bandwidth_, band_.data(), x, y); break;
  }
}

Block SymOperator::apply(const Block& x) const {
  Block y(x.rows(), x.cols());
  apply(x, y);
  return y;
}

double SymOperator::diag_entry(int i) const {
  switch (storage_) {
    case Storage::Dense: return dense_[size_t(i) * (i + 1) / 2 + i];
    case Storage::Diagonal: return diag_[i];
    case Storage::Banded: return band_[size_t(i) * (bandwidth_ + 1) + bandwidth_];
    case Storage::Csr:
      for (int t = csr_ptr_[i]; t < csr_ptr_[i + 1]; ++t)
        if (csr_idx_[t] == i) return csr_val_[t];
      return 0.0;
  }
  return 0.0;
}

double SymOperator::max_abs_entry() const {
  double m = 0.0;
  for_each_lower([&m](int, int, double v) { m = std::max(m, std::fabs(v)); });
  return m;
}

double SymOperator::column_norm(int j) const {
  double s = 0.0;
  if (storage_ == Storage::Csr) {
    for (int t = adj_ptr_[j]; t < adj_ptr_[j + 1]; ++t) s += adj_val_[t] * adj_val_[t];
    return std::sqrt(s);
  }
  for_each_lower([&s, j](int r, int c, double v) {
    if (r == j || c == j) s += v * v;
  });
  return std::sqrt(s);
}

void SymOperator::for_each_lower(const std::function<void(int, int, double)>& f) const {
  switch (storage_) {
    case Storage::Dense:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j) {
          const double v = dense_[size_t(i) * (i + 1) / 2 + j];
          if (v != 0.0) f(i, j, v);
        }
      break;
    case Storage::Diagonal:
      for (int i = 0; i < n_; ++i)
        if (diag_[i] != 0.0) f(i, i, diag_[i]);
      break;
    case Storage::Csr:
      for (int i = 0; i < n_; ++i)
        for (int t = csr_ptr_[i]; t < csr_ptr_[i + 1]; ++t)
          if (csr_val_[t] != 0.0) f(csr_idx_[t], i, csr_val_[t]);
      break;
    case Storage::Banded:
      for (int i = 0; i < n_; ++i) {
        const int jlo = std::max(0, i - bandwidth_);
        for (int j = jlo; j <= i; ++j) {
          const double v = band_[size_t(i) * (bandwidth_ + 1) + (j - i + bandwidth_)];
          if (v != 0.0) f(i, j, v);
        }
      }
      break;
  }
}

std::vector<std::pair<int, double>> SymOperator::lower_column(int j) const {
  std::vector<std::pair<int, double>> out;
  switch (storage_) {
    case Storage::Diagonal:
      if (diag_[j] != 0.0) out.emplace_back(j, diag_[j]);
      break;
    case Storage::Banded: {
      const int ihi = std::min(n_ - 1, j + bandwidth_);
      for (int i = j; i <= ihi; ++i) {
        const double v = band_[size_t(i) * (bandwidth_ + 1) + (j - i + bandwidth_)];
        if (v != 0.0) out.emplace_back(i, v);
      }
      break;
    }
    case Storage::Dense:
      for (int i = j; i < n_; ++i) {
        const double v = dense_[size_t(i) * (i + 1) / 2 + j];
        if (v != 0.0) out.emplace_back(i, v);
      }
      break;
    case Storage::Csr:
      for (int t = adj_ptr_[j]; t < adj_ptr_[j + 1]; ++t)
        if (adj_idx_[t] >= j && adj_val_[t] != 0.0) out.emplace_back(adj_idx_[t], adj_val_[t]);
      break;
  }
  return out;
}

Block SymOperator::to_dense(int max_dim) const {
  if (n_ > max_dim) throw DimensionError("to_dense: dimension exceeds cap");
  Block d(n_, n_);
  for_each_lower([&d](int i, int j, double v) {
    d(i, j) = v;
    d(j, i) = v;
  });
  return d;
}

SymOperator SymOperator::shifted(double sigma, const SymOperator& other) const {
  if (other.dim() != n_) throw DimensionError("shifted: dimension mismatch");
  if (storage_ == Storage::Diagonal && other.storage_ == Storage::Diagonal) {
    std::vector<double> d(n_);
    for (int i = 0; i < n_; ++i) d[i] = diag_[i] - sigma * other.diag_[i];
    return diagonal(std::move(d));
  }
  // fall back to a dense merge; shifted pairs only occur in small problems
  Block a = to_dense();
  const Block b = other.to_dense();
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) a(i, j) -= sigma * b(i, j);
  return dense_from(a);
}

bool SymOperator::is_identity() const {
  if (storage_ != Storage::Diagonal) return false;
  for (double v : diag_)
    if (v != 1.0) return false;
  return true;
}

} // namespace bpg
