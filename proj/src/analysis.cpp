#include "bpg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"
#include "bpg/small_eig.hpp"
#include "bpg/svd.hpp"

namespace bpg {

InvariantSplit make_split(const Spectrum& sp, int i, int j, int s) {
  if (!(1 <= i && i <= s && s <= j && j <= sp.n_total - 1))
    throw ParamError("make_split: need 1 <= i <= s <= j <= n-1");
  if (sp.vectors.cols() < j)
    throw ParamError("make_split: spectrum carries fewer than j eigenvectors");
  InvariantSplit sa;
  sa.i = i;
  sa.j = j;
  sa.s = s;
  sa.skipped = sp.vectors.sub_cols(j - s + i, s - i); // indices j-s+i+1 .. j
  sa.kept = sp.vectors.sub_cols(j - s, i);            // indices j-s+1 .. j-s+i
  return sa;
}

Subspace intersect(const Subspace& y, const Block& block, const InnerProduct& ip) {
  if (block.cols() == 0) return y;
  const Block gy = ip.apply(y.basis());
  const Block coeff = kernels::gram(block, gy); // (block cols) x (y dim)
  const Block null_c = null_coefficients(coeff, 1e-10);
  if (null_c.cols() == 0) return Subspace(Block(y.ambient_dim(), 0), ip);
  // y orthonormal and null_c orthonormal coefficients keep the product
  // orthonormal without another factorization pass
  return Subspace(kernels::multiply(y.basis(), null_c), ip);
}

namespace {

// F = G^{-1/2} for a symmetric positive definite small matrix; the smallest
// eigenvalue ratio is reported for rank decisions.
struct InvSqrtResult {
  Block f;
  double lambda_min = 0.0, lambda_max = 0.0;
};

InvSqrtResult inv_sqrt(const Block& g) {
  SmallEig e = sym_eig_small(g);
  InvSqrtResult out;
  const int k = g.rows();
  out.lambda_max = k > 0 ? std::max(e.values.front(), 0.0) : 0.0;
  out.lambda_min = k > 0 ? e.values.back() : 0.0;
  out.f = Block(k, k);
  if (out.lambda_min <= 0.0) return out; // caller checks
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double s = 0.0;
      for (int t = 0; t < k; ++t)
        s += e.vectors(a, t) * e.vectors(b, t) / std::sqrt(e.values[t]);
      out.f(a, b) = s;
    }
  return out;
}

} // namespace

GammaValue gamma_tilde(const Subspace& y_tilde, const Subspace& u_space,
                       const EigContext& ctx) {
  GammaValue out;
  const int i = y_tilde.dim();
  if (i == 0) {
    out.reason = "empty auxiliary subspace";
    return out;
  }
  if (u_space.dim() < i) {
    out.reason = "preconditioned subspace dimension below i";
    return out;
  }
  const bool need_solve = !ctx.a->is_identity();
  if (need_solve && ctx.a_chol == nullptr)
    throw Error("gamma_tilde: A-solve required but no factorization supplied");

  const Block my = ctx.apply_m(y_tilde.basis());
  const Block w = need_solve ? ctx.a_chol->solve(my) : my; // A^{-1} M Y~
  const Block aw = ctx.apply_a(w);

  // R~ = W - Y~ (Y~^T A W)
  const Block c1 = kernels::gram(y_tilde.basis(), aw);
  const Block r_tilde =
      kernels::add_scaled(1.0, w, -1.0, kernels::multiply(y_tilde.basis(), c1));

  const Block a_rt = ctx.apply_a(r_tilde);
  const Block g_rt = kernels::gram(r_tilde, a_rt);
  const InvSqrtResult isr = inv_sqrt(g_rt);
  if (!(isr.lambda_min > 1e-10 * isr.lambda_max) || isr.lambda_max <= 0.0) {
    out.reason = "residual block rank-deficient";
    return out;
  }

  // U: A-orthogonal projection of W onto the u_space, orthonormalized
  Block u;
  if (u_space.dim() == i) {
    u = u_space.basis();
  } else {
    const Block cu = kernels::gram(u_space.basis(), aw);
    const Block proj = kernels::multiply(u_space.basis(), cu);
    OrthoOptions opts;
    opts.allow_truncation = true;
    const Subspace us = orthonormalize(proj, InnerProduct::weighted(*ctx.a), opts);
    if (us.dim() < i) {
      out.reason = "projected preconditioned block rank-deficient";
      return out;
    }
    u = us.basis();
  }

  // S = W - U (U^T A W)
  const Block cu2 = kernels::gram(u, aw);
  const Block s_blk = kernels::add_scaled(1.0, w, -1.0, kernels::multiply(u, cu2));

  const Block a_s = ctx.apply_a(s_blk);
  const Block g_s = kernels::gram(s_blk, a_s); // S^T A S
  // value^2 = lambda_max( F S^T A S F )
  const Block fs = kernels::multiply(g_s, isr.f);
  const Block k = kernels::multiply(isr.f, fs);
  Block ksym = k;
  for (int a = 0; a < ksym.rows(); ++a)
    for (int b = 0; b < a; ++b) {
      const double v = 0.5 * (ksym(a, b) + ksym(b, a));
      ksym(a, b) = v;
      ksym(b, a) = v;
    }
  const SmallEig ke = sym_eig_small(ksym);
  out.value = std::sqrt(std::max(ke.values.front(), 0.0));
  out.valid = out.value < 1.0;
  if (!out.valid) out.reason = "gamma at or above one";
  return out;
}

std::pair<AuxState, GammaSample> aux_step(const AuxState& cur, const EigContext& ctx,
                                          const Preconditioner& t, double omega,
                                          const InvariantSplit& split) {
  const InnerProduct ip = InnerProduct::weighted(*ctx.a);
  const RitzSet& rs = cur.ritz;
  GammaSample sample;

  const Subspace y_tilde = intersect(rs.vectors, split.skipped, ip);
  const Subspace y_hat = intersect(rs.vectors, split.kept, ip);
  sample.dim_tilde = y_tilde.dim();
  sample.dim_hat = y_hat.dim();

  // U = V diag(theta) + T (M V - A V diag(theta))
  Block tr = t.apply(rs.residual_block);
  if (omega != 1.0) {
    const std::vector<double> sc(tr.cols(), omega);
    kernels::scale_cols(tr, sc);
  }
  const Block u = kernels::diag_combine(rs.vectors.basis(), rs.values, tr);
  OrthoOptions opts;
  opts.allow_truncation = true;
  const Subspace qu = orthonormalize(u, ip, opts);
  const Subspace u_tilde = intersect(qu, split.skipped, ip);
  const Subspace u_hat = intersect(qu, split.kept, ip);
  sample.dim_u_tilde = u_tilde.dim();

  const GammaValue gv = gamma_tilde(y_tilde, u_tilde, ctx);
  sample.gamma = gv.value;
  const bool dims_ok =
      sample.dim_tilde == split.i && sample.dim_hat == split.s - split.i;
  sample.valid = gv.valid && dims_ok;
  sample.reason = !dims_ok ? "auxiliary dimensions deviate from (i, s-i)" : gv.reason;

  // partial extractions and the recombination
  RitzSet tilde_next, hat_next;
  bool have_tilde = false, have_hat = false;
  if (y_tilde.dim() > 0) {
    const Block trial = y_tilde.basis().hcat(u_tilde.basis());
    tilde_next = rayleigh_ritz(trial, ctx, y_tilde.dim(), rs.orientation);
    have_tilde = true;
  }
  if (y_hat.dim() > 0) {
    const Block trial = y_hat.basis().hcat(u_hat.basis());
    hat_next = rayleigh_ritz(trial, ctx, y_hat.dim(), rs.orientation);
    have_hat = true;
  }

  Block combined(rs.vectors.ambient_dim(), 0);
  if (have_tilde) combined = combined.hcat(tilde_next.vectors.basis());
  if (have_hat) combined = combined.hcat(hat_next.vectors.basis());
  OrthoOptions comb_opts;
  comb_opts.allow_truncation = true;
  const Subspace span = orthonormalize(combined, ip, comb_opts);
  AuxState next;
  next.ritz = rayleigh_ritz(span.basis(), ctx, span.dim(), rs.orientation);

  if (dims_ok && have_tilde && have_hat && next.ritz.dim() == split.s) {
    // reconstruction check: the recombined iterate's split components must
    // coincide with the partial extraction outputs
    const Subspace again = intersect(next.ritz.vectors, split.skipped, ip);
    if (again.dim() == tilde_next.dim())
      sample.partial_consistency = max_sin_angle(again, tilde_next.vectors);
  }

  return {std::move(next), std::move(sample)};
}

std::vector<GammaSample> aux_run(const Block& start_basis, const EigContext& ctx,
                                 const Preconditioner& t, double omega,
                                 const InvariantSplit& split, int steps,
                                 double noise_floor) {
  std::vector<GammaSample> samples;
  AuxState state;
  state.ritz = rayleigh_ritz(start_basis, ctx, start_basis.cols(), Orientation::Largest);
  for (int l = 0; l < steps; ++l) {
    auto [next, sample] = aux_step(state, ctx, t, omega, split);
    sample.step = l;
    // below the floor the normalized quantity is roundoff, not signal
    double res_scale = 0.0, val_scale = 0.0;
    for (int j = 0; j < state.ritz.dim(); ++j) {
      res_scale = std::max(res_scale, state.ritz.residual_norms[j]);
      val_scale = std::max(val_scale, std::fabs(state.ritz.values[j]));
    }
    if (sample.valid && res_scale < noise_floor * std::max(val_scale, 1e-300)) {
      sample.valid = false;
      sample.reason = "residual scale under the measurement noise floor";
    }
    samples.push_back(sample);
    state = std::move(next);
  }
  return samples;
}

// ------------------------------------------------------------------ bounds

std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::Lm2e1: return "lm2e1";
    case BoundKind::Lm2e2: return "lm2e2";
    case BoundKind::Thm2e1: return "thm2e1";
    case BoundKind::Thm2e2: return "thm2e2";
    case BoundKind::Thm2e3: return "thm2e3";
    case BoundKind::Neighbor: return "neighbor";
    case BoundKind::Bpsde: return "bpsde";
  }
  return "?";
}

BoundKind bound_kind_from(const std::string& name) {
  for (BoundKind k : {BoundKind::Lm2e1, BoundKind::Lm2e2, BoundKind::Thm2e1,
                      BoundKind::Thm2e2, BoundKind::Thm2e3, BoundKind::Neighbor,
                      BoundKind::Bpsde})
    if (bound_kind_name(k) == name) return k;
  throw ParamError("unknown bound kind '" + name + "'");
}

double kappa(const Spectrum& sp, int i, int j, int s) {
  if (!(1 <= i && i <= s && s <= j)) throw ParamError("kappa: need 1 <= i <= s <= j");
  if (sp.leading_count() < j + 1) throw ParamError("kappa: spectrum too short for j+1");
  const double mu_hi = sp.value(j - s + i);
  const double mu_lo = sp.value(j + 1);
  const double mu_n = sp.mu_min;
  if (!(mu_hi - mu_n > 0.0))
    throw ParamError("kappa: degenerate denominator mu_{j-s+i} - mu_n");
  return (mu_lo - mu_n) / (mu_hi - mu_n);
}

double conv_factor(double kappa_value, double q) {
  if (!(kappa_value >= 0.0 && kappa_value <= 1.0))
    throw ParamError("conv_factor: kappa outside [0, 1]");
  if (!(q >= 0.0 && q < 1.0)) throw ParamError("conv_factor: q outside [0, 1)");
  return (kappa_value + q * (2.0 - kappa_value)) / ((2.0 - kappa_value) + q * kappa_value);
}

double ratio_to_error(double ratio_bound, double mu_ref, double mu_lower) {
  if (!(ratio_bound >= 0.0)) return 0.0;
  if (!(mu_ref > mu_lower)) throw ParamError("ratio_to_error: mu_ref must exceed mu_lower");
  return ratio_bound * (mu_ref - mu_lower) / (1.0 + ratio_bound);
}

BoundCurve bound_curve(BoundKind kind, const Spectrum& sp, int i, int j, int s, double q,
                       double theta_s0, int steps) {
  BoundCurve c;
  c.kind = kind;
  c.i = i;
  c.j = j;
  c.s = s;
  c.q = q;
  c.theta0 = theta_s0;

  double rho0 = 0.0;
  switch (kind) {
    case BoundKind::Lm2e1:
    case BoundKind::Thm2e1: {
      c.j = j = s;
      if (kind == BoundKind::Lm2e1) c.q = q = 0.0;
      c.kappa = kappa(sp, i, s, s);
      c.mu_ref = sp.value(i);
      c.mu_lower = sp.value(s + 1);
      if (!(theta_s0 > c.mu_lower))
        throw ParamError("bound_curve: theta_s0 must lie in (mu_{s+1}, mu_i]");
      break;
    }
    case BoundKind::Lm2e2:
    case BoundKind::Thm2e2: {
      if (kind == BoundKind::Lm2e2) c.q = q = 0.0;
      c.kappa = kappa(sp, i, j, s);
      c.mu_ref = sp.value(j - s + i);
      c.mu_lower = sp.value(j + 1);
      if (!(theta_s0 > c.mu_lower && theta_s0 <= c.mu_ref))
        throw ParamError("bound_curve: theta_s0 must lie in (mu_{j+1}, mu_{j-s+i}]");
      break;
    }
    case BoundKind::Thm2e3: {
      c.kappa = kappa(sp, s, j, s); // (mu_{j+1} - mu_n)/(mu_j - mu_n)
      c.mu_ref = sp.value(j);
      c.mu_lower = sp.value(j + 1);
      if (!(theta_s0 > c.mu_lower && theta_s0 < c.mu_ref))
        throw ParamError("bound_curve: theta_s0 must lie in (mu_{j+1}, mu_j)");
      break;
    }
    case BoundKind::Neighbor: {
      c.j = j = s;
      const double mu_i = sp.value(i);
      const double mu_next = sp.value(i + 1);
      const double scale = std::max(std::fabs(mu_i), std::fabs(sp.mu_min));
      if (std::fabs(mu_i - mu_next) <= 1e-10 * scale) {
        c.defined = false;
        c.note = "multiple eigenvalue: mu_i equals mu_{i+1}";
        return c;
      }
      if (!(mu_i - sp.mu_min > 0.0))
        throw ParamError("bound_curve: degenerate denominator mu_i - mu_n");
      c.kappa = (mu_next - sp.mu_min) / (mu_i - sp.mu_min);
      c.mu_ref = mu_i;
      c.mu_lower = sp.value(s + 1);
      if (!(theta_s0 > c.mu_lower))
        throw ParamError("bound_curve: theta_s0 must lie in (mu_{s+1}, mu_i]");
      break;
    }
    case BoundKind::Bpsde: {
      // ascending orientation: values are the smallest lambda, mu_min the largest
      const double l_ref = sp.value(j - s + i);
      const double l_hi = sp.value(j + 1);
      const double l_n = sp.mu_min;
      if (!(l_n - l_ref > 0.0) || !(l_hi > 0.0))
        throw ParamError("bound_curve: degenerate bpsde spectrum");
      c.kappa = l_ref * (l_n - l_hi) / (l_hi * (l_n - l_ref));
      c.mu_ref = l_ref;
      c.mu_lower = l_hi;
      if (!(theta_s0 >= l_ref && theta_s0 < l_hi))
        throw ParamError("bound_curve: theta_s0 must lie in [lambda_{j-s+i}, lambda_{j+1})");
      rho0 = (theta_s0 - l_ref) / (l_hi - theta_s0);
      break;
    }
  }
  if (kind != BoundKind::Bpsde)
    rho0 = std::max(0.0, (c.mu_ref - theta_s0) / (theta_s0 - c.mu_lower));

  const double f = conv_factor(c.kappa, c.q);
  c.ratio_bounds.resize(steps + 1);
  c.error_bounds.resize(steps + 1);
  double cur = rho0;
  for (int l = 0; l <= steps; ++l) {
    c.ratio_bounds[l] = cur;
    c.error_bounds[l] = kind == BoundKind::Bpsde
                            ? ratio_to_error(cur, c.mu_lower, c.mu_ref)
                            : ratio_to_error(cur, c.mu_ref, c.mu_lower);
    cur *= f * f;
  }
  return c;
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  if (!applicable) {
    os << "not applicable: the iteration never entered the final phase\n";
    return os.str();
  }
  os << "phase entry at step " << phase_entry << ", " << checked << " comparisons, "
     << violations.size() << " violation(s)\n";
  for (const auto& v : violations) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %s i=%d step=%d observed=%.6g bound=%.6g\n",
                  bound_kind_name(v.kind).c_str(), v.i, v.step, v.observed, v.bound);
    os << buf;
  }
  if (violations.empty()) os << "all bounds hold\n";
  return os.str();
}

ValidationReport validate_trace(const IterTrace& trace, const std::vector<BoundCurve>& curves,
                                const Spectrum& sp) {
  ValidationReport rep;
  const int s = trace.s;
  // locate phase entry independently of the trace flags
  int l0 = -1;
  for (size_t l = 0; l < trace.steps.size(); ++l) {
    if (sp.leading_count() >= s + 1 &&
        trace.steps[l].theta.at(s - 1) > sp.value(s + 1)) {
      l0 = static_cast<int>(l);
      break;
    }
  }
  rep.phase_entry = l0;
  rep.applicable = l0 >= 0;
  if (!rep.applicable) return rep;

  for (const BoundCurve& c : curves) {
    if (!c.defined) continue;
    const int track = c.kind == BoundKind::Thm2e3 ? s : c.i;
    for (size_t l = l0; l < trace.steps.size(); ++l) {
      const int off = static_cast<int>(l) - l0;
      if (off >= static_cast<int>(c.ratio_bounds.size())) break;
      const double theta = trace.steps[l].theta.at(track - 1);
      ++rep.checked;
      const double scale = std::max(std::fabs(c.mu_ref), 1.0);
      if (theta >= c.mu_ref - 1e-12 * scale) {
        // ratio blows up here; compare plain errors instead
        const double err = c.mu_ref - theta;
        if (err > c.error_bounds[off] + 1e-12 * scale)
          rep.violations.push_back({c.kind, c.i, static_cast<int>(l), err,
                                    c.error_bounds[off]});
        continue;
      }
      if (!(theta > c.mu_lower)) {
        rep.violations.push_back({c.kind, c.i, static_cast<int>(l), theta, c.mu_lower});
        continue;
      }
      const double ratio = (c.mu_ref - theta) / (theta - c.mu_lower);
      if (ratio > c.ratio_bounds[off] + 1e-9)
        rep.violations.push_back({c.kind, c.i, static_cast<int>(l), ratio,
                                  c.ratio_bounds[off]});
    }
  }
  return rep;
}

ValidationReport check_single_step_sharp(const IterTrace& trace, const Spectrum& sp,
                                         double gamma_quality) {
  ValidationReport rep;
  rep.applicable = true;
  rep.phase_entry = trace.phase_entry;
  const int s = trace.s;
  if (sp.leading_count() < sp.n_total)
    throw ParamError("check_single_step_sharp: full spectrum required");

  auto locate = [&](double theta) -> int {
    // largest j with mu_{j+1} < theta < mu_j, or 0 if none
    if (!(theta < sp.value(s)) || !(theta > sp.mu_min)) return 0;
    int lo = s, hi = sp.n_total; // theta in (mu_hi, mu_lo] search window
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      if (theta < sp.value(mid)) lo = mid;
      else hi = mid;
    }
    // theta in [mu_{lo+1}, mu_lo); require strict interior
    const double scale = std::max(std::fabs(sp.value(1)), 1.0);
    if (theta <= sp.value(lo + 1) + 1e-13 * scale) return 0;
    if (theta >= sp.value(lo) - 1e-13 * scale) return 0;
    return lo;
  };

  for (size_t l = 0; l + 1 < trace.steps.size(); ++l) {
    const double theta = trace.steps[l].theta.at(s - 1);
    const double theta_next = trace.steps[l + 1].theta.at(s - 1);
    const int j = locate(theta);
    if (j < s) continue;
    const double mu_j = sp.value(j), mu_j1 = sp.value(j + 1);
    const double f = conv_factor(kappa(sp, s, j, s), gamma_quality);
    const double rhs = f * f * (mu_j - theta) / (theta - mu_j1);
    ++rep.checked;
    if (!(theta_next > mu_j1)) {
      rep.violations.push_back({BoundKind::Thm2e3, s, static_cast<int>(l + 1), theta_next,
                                mu_j1});
      continue;
    }
    const double lhs = (mu_j - theta_next) / (theta_next - mu_j1);
    if (lhs > rhs + 1e-9)
      rep.violations.push_back({BoundKind::Thm2e3, s, static_cast<int>(l + 1), lhs, rhs});
  }
  return rep;
}

void write_bounds_csv(const std::vector<BoundCurve>& curves, const std::string& path,
                      const std::map<std::string, std::string>& echo) {
  std::ofstream out(path);
  if (!out) throw Error("write_bounds_csv: cannot open " + path);
  for (const auto& [k, v] : echo) out << "# " << k << " = " << v << "\n";
  out << "kind,i,j,s,kappa,q,step,ratio_bound,error_bound\n";
  char buf[192];
  for (const BoundCurve& c : curves) {
    if (!c.defined) {
      std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,,,,,\n", bound_kind_name(c.kind).c_str(),
                    c.i, c.j, c.s);
      out << buf;
      continue;
    }
    for (size_t l = 0; l < c.ratio_bounds.size(); ++l) {
      std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.12g,%.12g,%zu,%.12g,%.12g\n",
                    bound_kind_name(c.kind).c_str(), c.i, c.j, c.s, c.kappa, c.q, l,
                    c.ratio_bounds[l], c.error_bounds[l]);
      out << buf;
    }
  }
}

std::vector<BoundCurve> read_bounds_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_bounds_csv: cannot open " + path);
  std::vector<BoundCurve> curves;
  std::string line;
  bool header_seen = false;
  auto find_curve = [&](BoundKind k, int i, int j, int s) -> BoundCurve& {
    for (auto& c : curves)
      if (c.kind == k && c.i == i && c.j == j && c.s == s) return c;
    BoundCurve c;
    c.kind = k;
    c.i = i;
    c.j = j;
    c.s = s;
    curves.push_back(c);
    return curves.back();
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    while (f.size() < 9) f.emplace_back();
    BoundCurve& c = find_curve(bound_kind_from(f[0]), std::atoi(f[1].c_str()),
                               std::atoi(f[2].c_str()), std::atoi(f[3].c_str()));
    if (f[6].empty()) {
      c.defined = false;
      continue;
    }
    c.kappa = std::strtod(f[4].c_str(), nullptr);
    c.q = std::strtod(f[5].c_str(), nullptr);
    const size_t step = std::strtoul(f[6].c_str(), nullptr, 10);
    if (c.ratio_bounds.size() <= step) {
      c.ratio_bounds.resize(step + 1, 0.0);
      c.error_bounds.resize(step + 1, 0.0);
    }
    c.ratio_bounds[step] = std::strtod(f[7].c_str(), nullptr);
    c.error_bounds[step] = std::strtod(f[8].c_str(), nullptr);
  }
  return curves;
}

} // namespace bpg
