#include "bpg/small_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bpg/common.hpp"

namespace bpg {

namespace {

double off_diagonal_norm(const Block& a) {
  double s = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius(const Block& a) {
  double s = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

} // namespace

SmallEig sym_eig_small(const Block& s) {
  if (s.rows() != s.cols()) throw DimensionError("sym_eig_small: not square");
  const int k = s.rows();
  if (k > 2000) throw DimensionError("sym_eig_small: dimension exceeds cap 2000");

  Block a = s;
  Block v = Block::identity(k, k);
  const double scale = frobenius(a);
  const double tol = 1e-14 * std::max(scale, 1e-300);
  const int max_sweeps = 60;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) break;
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= tol / (2.0 * k)) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (int i = 0; i < k; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - sn * aiq;
          a(i, q) = sn * aip + c * aiq;
        }
        for (int j = 0; j < k; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - sn * aqj;
          a(q, j) = sn * apj + c * aqj;
        }
        for (int i = 0; i < k; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - sn * viq;
          v(i, q) = sn * vip + c * viq;
        }
      }
    }
  }
  const double off = off_diagonal_norm(a);
  if (off > 1e-12 * std::max(scale, 1e-300) && sweep == max_sweeps)
    throw ConvergenceError("sym_eig_small: Jacobi sweeps exhausted, off-diagonal norm " +
                               std::to_string(off),
                           off);

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int x, int y) { return a(x, x) > a(y, y); });

  SmallEig out;
  out.values.resize(k);
  out.vectors = Block(k, k);
  for (int j = 0; j < k; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < k; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

SmallEig sym_eig_small(const Block& s, const Block& g) {
  if (!s.same_shape(g) || s.rows() != s.cols())
    throw DimensionError("sym_eig_small: pair shape mismatch");
  const int k = s.rows();

  // G = L L^T by unblocked dense Cholesky
  Block l(k, k);
  for (int j = 0; j < k; ++j) {
    double d = g(j, j);
    for (int t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
    if (!(d > 0.0) || !std::isfinite(d))
      throw NotPositiveDefiniteError("sym_eig_small: G not positive definite at pivot " +
                                         std::to_string(j),
                                     j);
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < k; ++i) {
      double x = g(i, j);
      for (int t = 0; t < j; ++t) x -= l(i, t) * l(j, t);
      l(i, j) = x / l(j, j);
    }
  }

  // S' = L^{-1} S L^{-T}
  Block w = s;
  for (int c = 0; c < k; ++c) { // forward solve on columns: L W = S
    for (int i = 0; i < k; ++i) {
      double x = w(i, c);
      for (int t = 0; t < i; ++t) x -= l(i, t) * w(t, c);
      w(i, c) = x / l(i, i);
    }
  }
  for (int r = 0; r < k; ++r) { // forward solve on rows: W L^T = previous
    for (int j = 0; j < k; ++j) {
      double x = w(r, j);
      for (int t = 0; t < j; ++t) x -= w(r, t) * l(j, t);
      w(r, j) = x / l(j, j);
    }
  }

  SmallEig std_eig = sym_eig_small(w);

  // back-transform: C = L^{-T} C'
  Block c = std_eig.vectors;
  for (int col = 0; col < k; ++col) {
    for (int i = k - 1; i >= 0; --i) {
      double x = c(i, col);
      for (int t = i + 1; t < k; ++t) x -= l(t, i) * c(t, col);
      c(i, col) = x / l(i, i);
    }
  }
  std_eig.vectors = std::move(c);
  return std_eig;
}

} // namespace bpg
