#include "bpg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bpg/common.hpp"
#include "bpg/matrix_market.hpp"

namespace bpg {

Problem make_diag_cluster(int n) {
  if (n < 8) throw ParamError("diag-cluster: n must be at least 8");
  std::vector<double> mu(n);
  for (int i = 1; i <= 6; ++i) mu[i - 1] = 10.07 - 0.01 * i;
  // equidistant tail from 9 down to 1, endpoints attained
  for (int k = 7; k <= n; ++k)
    mu[k - 1] = 9.0 - 8.0 * double(k - 7) / double(n - 7);
  Problem p;
  p.m = SymOperator::diagonal(std::move(mu), Definiteness::PositiveDefinite);
  p.a = SymOperator::identity(n);
  p.name = "diag-cluster";
  return p;
}

Problem make_slit_laplacian(int inv_h) {
  if (inv_h < 2) throw ParamError("lap-slit: 1/h must be an integer >= 2");
  const int m = inv_h;
  const int nx = 2 * m - 1; // interior x indices 1..2m-1
  const int ny = m - 1;     // interior y indices 1..m-1

  // slit nodes: x index == m, 1/10 <= iy/m <= 9/10 in exact integers
  auto on_slit = [m](int ix, int iy) {
    return ix == m && 10 * iy >= m && 10 * iy <= 9 * m;
  };

  std::vector<int> id(size_t(nx) * ny, -1);
  auto cell = [nx](int ix, int iy) { return size_t(iy - 1) * nx + (ix - 1); };
  int n = 0;
  for (int iy = 1; iy <= ny; ++iy)
    for (int ix = 1; ix <= nx; ++ix)
      if (!on_slit(ix, iy)) id[cell(ix, iy)] = n++;

  // bandwidth: widest index gap to a lower neighbor
  int bw = 1;
  for (int iy = 2; iy <= ny; ++iy)
    for (int ix = 1; ix <= nx; ++ix) {
      const int u = id[cell(ix, iy)];
      if (u < 0) continue;
      const int v = id[cell(ix, iy - 1)];
      if (v >= 0) bw = std::max(bw, u - v);
    }

  const double h2inv = double(m) * double(m);
  std::vector<double> band(size_t(n) * (bw + 1), 0.0);
  auto at = [&](int i, int j) -> double& { return band[size_t(i) * (bw + 1) + (j - i + bw)]; };
  for (int iy = 1; iy <= ny; ++iy)
    for (int ix = 1; ix <= nx; ++ix) {
      const int u = id[cell(ix, iy)];
      if (u < 0) continue;
      at(u, u) = 4.0 * h2inv;
      if (ix > 1) {
        const int v = id[cell(ix - 1, iy)];
        if (v >= 0) at(u, v) = -h2inv;
      }
      if (iy > 1) {
        const int v = id[cell(ix, iy - 1)];
        if (v >= 0) at(u, v) = -h2inv;
      }
    }

  Problem p;
  p.a = SymOperator::banded(n, bw, std::move(band), Definiteness::PositiveDefinite);
  p.m = SymOperator::identity(n);
  p.name = "lap-slit";
  return p;
}

Problem make_rect_laplacian(int nx, int ny, double hx, double hy) {
  if (nx < 1 || ny < 1) throw ParamError("lap-rect: nx, ny must be >= 1");
  if (!(hx > 0.0) || !(hy > 0.0)) throw ParamError("lap-rect: hx, hy must be > 0");
  const int n = nx * ny;
  const int bw = nx; // y-neighbor offset; x-neighbor offset is 1
  const double cx = 1.0 / (hx * hx), cy = 1.0 / (hy * hy);
  std::vector<double> band(size_t(n) * (bw + 1), 0.0);
  auto at = [&](int i, int j) -> double& { return band[size_t(i) * (bw + 1) + (j - i + bw)]; };
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int u = iy * nx + ix;
      at(u, u) = 2.0 * cx + 2.0 * cy;
      if (ix > 0) at(u, u - 1) = -cx;
      if (iy > 0) at(u, u - nx) = -cy;
    }

  std::vector<double> lam;
  lam.reserve(n);
  const double pi = 3.14159265358979323846264338327950288;
  for (int p = 1; p <= nx; ++p)
    for (int q = 1; q <= ny; ++q)
      lam.push_back((2.0 - 2.0 * std::cos(p * pi / (nx + 1))) * cx +
                    (2.0 - 2.0 * std::cos(q * pi / (ny + 1))) * cy);
  std::sort(lam.begin(), lam.end());

  Problem prob;
  prob.a = SymOperator::banded(n, bw, std::move(band), Definiteness::PositiveDefinite);
  prob.m = SymOperator::identity(n);
  prob.name = "lap-rect";
  prob.closed_spectrum = std::move(lam);
  return prob;
}

Problem load_problem(const std::string& m_path, const std::string& a_path) {
  Problem p;
  p.m = mm_read(m_path);
  p.a = a_path.empty() ? SymOperator::identity(p.m.dim()) : mm_read(a_path);
  if (p.a.dim() != p.m.dim())
    throw DimensionError("load_problem: M and A dimensions differ");
  p.name = "file";
  return p;
}

void write_spectrum_csv(const std::vector<double>& values, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_spectrum_csv: cannot open " + path);
  out << "index,value\n";
  char buf[64];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, values[i]);
    out << buf;
  }
}

} // namespace bpg
