#include "bpg/ic.hpp"

#include <algorithm>
#include <cmath>

#include "bpg/common.hpp"

namespace bpg {

IcFactor IcFactor::factor(const SymOperator& a, double droptol) {
  if (!(droptol > 0.0)) throw ParamError("ic: droptol must be > 0");
  try {
    return try_factor(a, droptol, 0.0);
  } catch (const NotPositiveDefiniteError&) {
    double max_diag = 0.0;
    for (int i = 0; i < a.dim(); ++i) max_diag = std::max(max_diag, a.diag_entry(i));
    const double shift = 1e-3 * max_diag;
    return try_factor(a, droptol, shift); // second failure propagates
  }
}

IcFactor IcFactor::try_factor(const SymOperator& a, double droptol, double shift) {
  const int n = a.dim();
  IcFactor f;
  f.n_ = n;
  f.shift_ = shift;
  f.diag_.assign(n, 0.0);
  f.rows_.resize(n);
  f.vals_.resize(n);

  std::vector<double> colnorm(n);
  for (int j = 0; j < n; ++j) colnorm[j] = a.column_norm(j);

  // pending[r]: columns whose next unused entry sits in row r
  std::vector<std::vector<std::pair<int, int>>> pending(n); // (col, position)
  std::vector<double> work(n, 0.0);
  std::vector<int> touched;

  for (int j = 0; j < n; ++j) {
    touched.clear();
    for (const auto& [r, v] : a.lower_column(j)) {
      work[r] = v;
      touched.push_back(r);
    }
    work[j] += shift;

    for (const auto& [k, pos] : pending[j]) {
      const double ljk = f.vals_[k][pos];
      // diagonal update from column k
      work[j] -= ljk * ljk;
      for (size_t t = pos + 1; t < f.rows_[k].size(); ++t) {
        const int r = f.rows_[k][t];
        if (work[r] == 0.0) touched.push_back(r);
        work[r] -= ljk * f.vals_[k][t];
      }
      if (pos + 1 < static_cast<int>(f.rows_[k].size()))
        pending[f.rows_[k][pos + 1]].emplace_back(k, pos + 1);
    }
    pending[j].clear();
    pending[j].shrink_to_fit();

    const double d = work[j];
    if (!(d > 0.0) || !std::isfinite(d)) {
      for (int r : touched) work[r] = 0.0;
      work[j] = 0.0;
      throw NotPositiveDefiniteError(
          "ic: non-positive pivot " + std::to_string(j) + " = " + std::to_string(d), j);
    }
    const double ljj = std::sqrt(d);
    f.diag_[j] = ljj;

    const double keep = droptol * colnorm[j];
    std::sort(touched.begin(), touched.end());
    for (int r : touched) {
      if (r <= j) {
        work[r] = 0.0;
        continue;
      }
      const double l = work[r] / ljj;
      work[r] = 0.0;
      if (std::fabs(l) >= keep) {
        f.rows_[j].push_back(r);
        f.vals_[j].push_back(l);
      }
    }
    work[j] = 0.0;
    if (!f.rows_[j].empty()) pending[f.rows_[j].front()].emplace_back(j, 0);
  }
  return f;
}

long IcFactor::nonzeros() const {
  long nnz = n_;
  for (const auto& r : rows_) nnz += static_cast<long>(r.size());
  return nnz;
}

void IcFactor::solve_in_place(Block& x) const {
  if (x.rows() != n_) throw DimensionError("ic solve: row mismatch");
  const int k = x.cols();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < k; ++c) {
    double* xc = x.col(c);
    for (int j = 0; j < n_; ++j) { // L y = b
      const double y = xc[j] / diag_[j];
      xc[j] = y;
      const auto& rs = rows_[j];
      const auto& vs = vals_[j];
      for (size_t t = 0; t < rs.size(); ++t) xc[rs[t]] -= vs[t] * y;
    }
    for (int j = n_ - 1; j >= 0; --j) { // L^T z = y
      double s = xc[j];
      const auto& rs = rows_[j];
      const auto& vs = vals_[j];
      for (size_t t = 0; t < rs.size(); ++t) s -= vs[t] * xc[rs[t]];
      xc[j] = s / diag_[j];
    }
  }
}

Block IcFactor::solve(const Block& b) const {
  Block x = b;
  solve_in_place(x);
  return x;
}

} // namespace bpg
