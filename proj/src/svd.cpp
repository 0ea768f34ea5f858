#include "bpg/svd.hpp"

#include <algorithm>
#include <cmath>

#include "bpg/kernels.hpp"
#include "bpg/small_eig.hpp"

namespace bpg {

namespace {

SvdResult from_gram(const Block& gram) {
  SmallEig e = sym_eig_small(gram);
  SvdResult out;
  out.singular_values.resize(e.values.size());
  for (size_t i = 0; i < e.values.size(); ++i)
    out.singular_values[i] = std::sqrt(std::max(e.values[i], 0.0));
  out.right_vectors = std::move(e.vectors);
  return out;
}

} // namespace

SvdResult svd_block(const Block& b) {
  // Wide blocks are fine: columns beyond the row count contribute exact
  // zeros to the Gram spectrum.
  return from_gram(kernels::gram(b, b));
}

SvdResult svd_block_weighted(const Block& b, const SymOperator& g) {
  const Block gb = g.apply(b);
  return from_gram(kernels::gram(b, gb));
}

int rank_by_gram(const SvdResult& s, double rel_tol) {
  if (s.singular_values.empty()) return 0;
  const double lmax = s.singular_values.front() * s.singular_values.front();
  if (lmax <= 0.0) return 0;
  int r = 0;
  for (double sv : s.singular_values) {
    if (sv * sv > rel_tol * lmax) ++r;
  }
  return r;
}

Block null_coefficients(const Block& b, double rel_tol) {
  const SvdResult s = svd_block(b);
  const int k = b.cols();
  const int r = rank_by_gram(s, rel_tol);
  const int d = k - r;
  Block out(k, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < k; ++i) out(i, j) = s.right_vectors(i, r + j);
  return out;
}

} // namespace bpg
