#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpg/sym_operator.hpp"

namespace bpg {

/// A generalized symmetric pair (M, A). The largest eigenvalues of (M, A)
/// are the computational target throughout.
struct Problem {
  SymOperator m;
  SymOperator a;
  std::string name;
  /// ascending eigenvalues of the single matrix, when known in closed form
  std::optional<std::vector<double>> closed_spectrum;
};

/// Diagonal test pair: M = diag(mu), A = I, with mu_i = 10.07 - 0.01 i for
/// i = 1..6 and the remaining entries equidistant from 9 down to 1, both
/// endpoints attained. Requires n >= 8.
Problem make_diag_cluster(int n);

/// Five-point Laplacian (scaled by 1/h^2) on the interior grid of
/// [0,2] x [0,1], zero Dirichlet data on the outer boundary and on every
/// grid node of the slit {1} x [0.1, 0.9]. Slit nodes are removed from the
/// unknowns; ordering is lexicographic by (y, x). The mesh is h = 1/inv_h
/// with integer inv_h >= 2. Membership of a node in the slit is decided in
/// exact integer arithmetic on grid indices. Returned as the pair (I, A).
Problem make_slit_laplacian(int inv_h);

/// Tensor five-point Laplacian on an nx x ny interior grid with mesh widths
/// hx, hy, plus its closed-form spectrum (ascending).
Problem make_rect_laplacian(int nx, int ny, double hx, double hy);

/// Pair loaded from MatrixMarket files; empty a_path means A = I.
Problem load_problem(const std::string& m_path, const std::string& a_path);

/// `index,value` CSV, 1-based indices, 17 significant digits.
void write_spectrum_csv(const std::vector<double>& values, const std::string& path);

} // namespace bpg
