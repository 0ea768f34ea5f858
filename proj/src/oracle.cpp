#include "bpg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"
#include "bpg/lanczos.hpp"
#include "bpg/small_eig.hpp"

namespace bpg {

namespace {

std::vector<double> certificates(const SymOperator& m, const SymOperator& a,
                                 const Block& vecs, const std::vector<double>& vals) {
  std::vector<double> out(vals.size(), 0.0);
  if (vecs.cols() == 0) return out;
  const Block mv = m.apply(vecs);
  const Block av = a.apply(vecs);
  for (size_t j = 0; j < vals.size(); ++j) {
    double rn = 0.0, an = 0.0;
    for (int i = 0; i < vecs.rows(); ++i) {
      const double r = mv(i, int(j)) - vals[j] * av(i, int(j));
      rn += r * r;
      an += av(i, int(j)) * av(i, int(j));
    }
    out[j] = std::sqrt(rn) / std::max(std::sqrt(an), 1e-300);
  }
  return out;
}

} // namespace

Spectrum dense_reference(const SymOperator& m, const SymOperator& a) {
  const int n = m.dim();
  if (n > 2000) throw DimensionError("dense_reference: n exceeds cap 2000");
  if (a.dim() != n) throw DimensionError("dense_reference: dimension mismatch");
  if (a.definiteness() == Definiteness::Indefinite)
    throw Error("dense_reference: A must be positive definite");

  const Block md = m.to_dense();
  const Block ad = a.to_dense();
  SmallEig e = sym_eig_small(md, ad); // throws if A is not SPD

  Spectrum sp;
  sp.values = std::move(e.values);
  sp.vectors = std::move(e.vectors);
  sp.descending = true;
  sp.n_total = n;
  sp.mu_min = sp.values.back();
  sp.residuals = certificates(m, a, sp.vectors, sp.values);
  return sp;
}

Spectrum diagonal_reference(const SymOperator& m_diag, int keep_vectors) {
  if (m_diag.storage() != Storage::Diagonal)
    throw DimensionError("diagonal_reference: operator is not diagonal");
  const int n = m_diag.dim();
  const auto& d = m_diag.diag_values();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&d](int x, int y) { return d[x] > d[y]; });

  Spectrum sp;
  sp.descending = true;
  sp.n_total = n;
  const int k = std::min(keep_vectors, n);
  sp.values.resize(k);
  sp.vectors = Block(n, k);
  for (int j = 0; j < k; ++j) {
    sp.values[j] = d[order[j]];
    sp.vectors(order[j], j) = 1.0;
  }
  sp.mu_min = d[order[n - 1]];
  sp.residuals.assign(k, 0.0);
  return sp;
}

Spectrum pair_reference(const SymOperator& m, const SymOperator& a, const CholFactor& a_chol,
                        int k, double tol) {
  const int n = m.dim();
  const InnerProduct ip = InnerProduct::weighted(a);

  const VecApply op = [&](const Block& x, Block& y) {
    y = a_chol.solve(m.apply(x));
  };

  LanczosOptions opts;
  opts.want_high = k;
  opts.tol = tol;
  const LanczosResult top = lanczos_extreme(op, ip, n, opts);

  LanczosOptions bottom_opts;
  bottom_opts.want_low = 1;
  bottom_opts.tol = std::max(tol, 1e-10);
  bottom_opts.seed = opts.seed ^ 0x517cc1b727220a95ULL;
  const LanczosResult bottom = lanczos_extreme(op, ip, n, bottom_opts);

  Spectrum sp;
  sp.values = top.high_values;
  sp.vectors = top.high_vectors;
  sp.descending = true;
  sp.n_total = n;
  sp.mu_min = bottom.low_values.at(0);
  sp.residuals = certificates(m, a, sp.vectors, sp.values);
  return sp;
}

Spectrum operator_extreme(const SymOperator& op, int k, bool largest, double tol) {
  const InnerProduct ip = InnerProduct::euclidean();
  const VecApply apply = [&](const Block& x, Block& y) { op.apply(x, y); };
  LanczosOptions opts;
  (largest ? opts.want_high : opts.want_low) = k;
  opts.tol = tol;
  const LanczosResult r = lanczos_extreme(apply, ip, op.dim(), opts);

  Spectrum sp;
  sp.descending = largest;
  sp.n_total = op.dim();
  sp.values = largest ? r.high_values : r.low_values;
  sp.vectors = largest ? r.high_vectors : r.low_vectors;
  sp.mu_min = 0.0; // unknown far end; caller may fill it
  const SymOperator ident = SymOperator::identity(op.dim());
  sp.residuals = certificates(op, ident, sp.vectors, sp.values);
  return sp;
}

void write_spectrum_csv(const Spectrum& sp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_spectrum_csv: cannot open " + path);
  out << "index,value,residual\n";
  char buf[96];
  for (size_t i = 0; i < sp.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.3g\n", i + 1, sp.values[i],
                  i < sp.residuals.size() ? sp.residuals[i] : 0.0);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%d,%.17g,\n", sp.n_total, sp.mu_min);
  out << buf;
}

Spectrum read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_spectrum_csv: cannot open " + path);
  Spectrum sp;
  std::string line;
  long lineno = 0;
  bool header_seen = false;
  long last_index = 0;
  double last_value = 0.0;
  std::vector<std::pair<long, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true; // column header
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');
    const long idx = std::strtol(tok.c_str(), nullptr, 10);
    std::getline(ls, tok, ',');
    const double val = std::strtod(tok.c_str(), nullptr);
    rows.emplace_back(idx, val);
    last_index = idx;
    last_value = val;
  }
  if (rows.empty()) throw ParseError("read_spectrum_csv: no data rows", lineno);
  sp.n_total = static_cast<int>(last_index);
  sp.mu_min = last_value;
  for (size_t t = 0; t + 1 < rows.size(); ++t) {
    if (rows[t].first != static_cast<long>(t + 1))
      throw ParseError("read_spectrum_csv: non-contiguous leading indices", t + 2);
    sp.values.push_back(rows[t].second);
  }
  // a full spectrum lists every index; then the tail row is both the last
  // leading value and mu_min
  if (last_index == static_cast<long>(rows.size())) sp.values.push_back(last_value);
  sp.descending = sp.values.size() < 2 || sp.values.front() >= sp.values.back();
  return sp;
}

} // namespace bpg
