#include "bpg/lanczos.hpp"

#include <algorithm>
#include <cmath>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"
#include "bpg/rng.hpp"
#include "bpg/small_eig.hpp"

namespace bpg {

namespace {

struct Locked {
  std::vector<double> values;
  std::vector<double> residuals;
  std::vector<bool> high_end;
  Block vectors;  // n x L, G-orthonormal
  Block gvectors; // G * vectors, cached for reorthogonalization

  int count(bool high) const {
    int c = 0;
    for (bool h : high_end)
      if (h == high) ++c;
    return c;
  }
  int total() const { return static_cast<int>(values.size()); }
};

// w -= V (V^T G w), with gv = G*V cached
void orthogonalize_against(Block& w, const Block& v, const Block& gv) {
  if (v.cols() == 0) return;
  const Block coeff = kernels::gram(gv, w);
  const Block proj = kernels::multiply(v, coeff);
  w = kernels::add_scaled(1.0, w, -1.0, proj);
}

struct TridiagEig {
  std::vector<double> values; // descending
  Block vectors;
};

TridiagEig tridiag_eig(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const int m = static_cast<int>(alpha.size());
  Block t(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) {
      t(i + 1, i) = beta[i];
      t(i, i + 1) = beta[i];
    }
  }
  SmallEig e = sym_eig_small(t);
  return {std::move(e.values), std::move(e.vectors)};
}

} // namespace

LanczosResult lanczos_extreme(const VecApply& op, const InnerProduct& ip, int n,
                              const LanczosOptions& opts) {
  if (opts.want_high + opts.want_low <= 0) throw ParamError("lanczos: nothing requested");
  if (opts.want_high + opts.want_low > n)
    throw ParamError("lanczos: more pairs requested than the dimension holds");
  const int budget = opts.max_iter > 0 ? opts.max_iter : 5 * n;
  const int basis_cap = std::max(8, std::min(opts.basis_cap, n));

  Rng rng(opts.seed);
  Locked locked;
  locked.vectors = Block(n, 0);
  locked.gvectors = Block(n, 0);

  int used = 0;
  int dead_starts = 0;
  double best_unconverged = 1.0;
  Block restart_hint(n, 0);

  auto wanted_more = [&] {
    return locked.count(true) < opts.want_high || locked.count(false) < opts.want_low;
  };

  while (wanted_more()) {
    if (used >= budget || dead_starts > 16)
      throw ConvergenceError("lanczos: iteration budget " + std::to_string(budget) +
                                 " exhausted, best unconverged residual " +
                                 std::to_string(best_unconverged),
                             best_unconverged);

    Block v(n, 1);
    if (restart_hint.cols() == 1) {
      v = restart_hint;
      restart_hint = Block(n, 0);
    } else {
      for (int i = 0; i < n; ++i) v(i, 0) = rng.gaussian();
    }
    orthogonalize_against(v, locked.vectors, locked.gvectors);
    {
      const double nrm = std::sqrt(std::max(ip.gram(v, v)(0, 0), 0.0));
      if (nrm <= 1e-14) {
        ++dead_starts;
        continue;
      }
      for (int i = 0; i < n; ++i) v(i, 0) /= nrm;
    }

    Block basis(n, 0), gbasis(n, 0);
    std::vector<double> alpha, beta; // beta has one entry fewer than alpha
    Block prev(n, 0);
    double scale = 0.0;

    // lock converged Ritz pairs, contiguous from each requested end
    auto extract_and_lock = [&](const TridiagEig& te, int m, double bm) {
      auto res_est = [&](int j) {
        return std::fabs(bm * te.vectors(m - 1, j)) /
               std::max(std::fabs(te.values[j]), 1e-300);
      };
      std::vector<std::pair<int, bool>> take;
      int last_high = -1;
      for (int j = 0, need = opts.want_high - locked.count(true); j < m && need > 0; ++j) {
        const double r = res_est(j);
        if (r > opts.tol) {
          best_unconverged = std::min(best_unconverged, r);
          break;
        }
        take.emplace_back(j, true);
        last_high = j;
        --need;
      }
      for (int j = m - 1, need = opts.want_low - locked.count(false);
           j > last_high && need > 0; --j) {
        const double r = res_est(j);
        if (r > opts.tol) {
          best_unconverged = std::min(best_unconverged, r);
          break;
        }
        take.emplace_back(j, false);
        --need;
      }
      for (const auto& [j, high] : take) {
        Block c(m, 1);
        for (int i = 0; i < m; ++i) c(i, 0) = te.vectors(i, j);
        Block x = kernels::multiply(basis, c);
        orthogonalize_against(x, locked.vectors, locked.gvectors);
        const double nrm = std::sqrt(std::max(ip.gram(x, x)(0, 0), 0.0));
        if (nrm < 1e-8) continue; // shadow of an already locked vector
        for (int i = 0; i < n; ++i) x(i, 0) /= nrm;
        locked.vectors = locked.vectors.hcat(x);
        locked.gvectors = locked.gvectors.hcat(ip.apply(x));
        locked.values.push_back(te.values[j]);
        locked.residuals.push_back(res_est(j));
        locked.high_end.push_back(high);
      }
    };

    while (used < budget) {
      Block w(n, 1);
      op(v, w);
      ++used;
      const Block gv = ip.apply(v);
      const double a = kernels::gram(gv, w)(0, 0);
      alpha.push_back(a);
      scale = std::max({scale, std::fabs(a), beta.empty() ? 0.0 : beta.back()});
      w = kernels::add_scaled(1.0, w, -a, v);
      if (prev.cols() == 1) w = kernels::add_scaled(1.0, w, -beta.back(), prev);
      basis = basis.hcat(v);
      gbasis = gbasis.hcat(gv);
      // full reorthogonalization against basis and locked vectors, two passes
      orthogonalize_against(w, basis, gbasis);
      orthogonalize_against(w, locked.vectors, locked.gvectors);
      orthogonalize_against(w, basis, gbasis);

      const double b = std::sqrt(std::max(ip.gram(w, w)(0, 0), 0.0));
      const int m = static_cast<int>(alpha.size());

      if (b <= 1e-13 * std::max(scale, 1e-300)) {
        // Krylov space exhausted; everything available is converged
        extract_and_lock(tridiag_eig(alpha, beta), m, 0.0);
        break;
      }

      if (m % 8 == 0 || m >= basis_cap || used >= budget) {
        const TridiagEig te = tridiag_eig(alpha, beta);
        auto res_est = [&](int j) {
          return std::fabs(b * te.vectors(m - 1, j)) /
                 std::max(std::fabs(te.values[j]), 1e-300);
        };
        int conv_high = 0;
        while (conv_high < m && res_est(conv_high) <= opts.tol) ++conv_high;
        int conv_low = 0;
        while (conv_low < m - conv_high && res_est(m - 1 - conv_low) <= opts.tol)
          ++conv_low;
        const bool enough_high = locked.count(true) + conv_high >= opts.want_high;
        const bool enough_low = locked.count(false) + conv_low >= opts.want_low;
        if ((enough_high && enough_low) || m >= basis_cap) {
          extract_and_lock(te, m, b);
          if (!(enough_high && enough_low)) {
            // keep climbing from the best unconverged Ritz vector
            const bool need_high = locked.count(true) < opts.want_high;
            const int j = need_high ? std::min(conv_high, m - 1)
                                    : std::max(m - 1 - conv_low, 0);
            Block c(m, 1);
            for (int i = 0; i < m; ++i) c(i, 0) = te.vectors(i, j);
            restart_hint = kernels::multiply(basis, c);
          }
          break;
        }
      }

      beta.push_back(b);
      prev = v;
      v = w;
      for (int i = 0; i < n; ++i) v(i, 0) /= b;
    }

    if (locked.total() >= n) break;
  }

  if (wanted_more())
    throw ConvergenceError("lanczos: iteration budget " + std::to_string(budget) +
                               " exhausted, best unconverged residual " +
                               std::to_string(best_unconverged),
                           best_unconverged);

  LanczosResult out;
  out.iterations = used;
  std::vector<int> hi, lo;
  for (int t = 0; t < locked.total(); ++t) (locked.high_end[t] ? hi : lo).push_back(t);
  std::sort(hi.begin(), hi.end(),
            [&](int a, int b) { return locked.values[a] > locked.values[b]; });
  std::sort(lo.begin(), lo.end(),
            [&](int a, int b) { return locked.values[a] < locked.values[b]; });
  hi.resize(std::min<size_t>(hi.size(), opts.want_high));
  lo.resize(std::min<size_t>(lo.size(), opts.want_low));

  auto gather = [&](const std::vector<int>& idx, std::vector<double>& vals, Block& vecs,
                    std::vector<double>& res) {
    vals.clear();
    res.clear();
    vecs = Block(n, static_cast<int>(idx.size()));
    for (size_t t = 0; t < idx.size(); ++t) {
      vals.push_back(locked.values[idx[t]]);
      res.push_back(locked.residuals[idx[t]]);
      for (int i = 0; i < n; ++i) vecs(i, static_cast<int>(t)) = locked.vectors(i, idx[t]);
    }
  };
  gather(hi, out.high_values, out.high_vectors, out.high_residual);
  gather(lo, out.low_values, out.low_vectors, out.low_residual);
  return out;
}

} // namespace bpg
