#include "bpg/ritz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"
#include "bpg/rng.hpp"
#include "bpg/small_eig.hpp"

namespace bpg {

Block EigContext::apply_m(const Block& x) const {
  Block y = m->apply(x);
  if (shift != 0.0) {
    const Block ax = a->apply(x);
    y = kernels::add_scaled(1.0, y, -shift, ax);
  }
  return y;
}

Block EigContext::apply_a(const Block& x) const { return a->apply(x); }

namespace {

std::vector<double> residual_norms_of(const EigContext& ctx, const Block& r) {
  std::vector<double> out(r.cols(), 0.0);
  const bool ainv = ctx.resnorm == ResNorm::AInv && !ctx.a->is_identity();
  if (ainv && ctx.a_chol == nullptr)
    throw Error("residual norms: A^{-1} norm requested but no factorization supplied");
  if (ainv) {
    const Block z = ctx.a_chol->solve(r);
    for (int j = 0; j < r.cols(); ++j) {
      double s = 0.0;
      for (int i = 0; i < r.rows(); ++i) s += r(i, j) * z(i, j);
      out[j] = std::sqrt(std::max(s, 0.0));
    }
  } else {
    for (int j = 0; j < r.cols(); ++j) {
      double s = 0.0;
      for (int i = 0; i < r.rows(); ++i) s += r(i, j) * r(i, j);
      out[j] = std::sqrt(s);
    }
  }
  return out;
}

} // namespace

RitzSet rayleigh_ritz(const Block& trial, const EigContext& ctx, int s,
                      Orientation orientation) {
  if (s < 1) throw ParamError("rayleigh_ritz: s must be >= 1");
  const InnerProduct ip = InnerProduct::weighted(*ctx.a);
  OrthoOptions opts;
  opts.allow_truncation = true;
  Subspace q = orthonormalize(trial, ip, opts);
  if (q.dim() < s)
    throw RankError("rayleigh_ritz: trial space has numerical rank " +
                        std::to_string(q.dim()) + " < s = " + std::to_string(s),
                    q.dim());

  const Block mq = ctx.apply_m(q.basis());
  Block smat = kernels::gram(q.basis(), mq);
  // symmetrize: the projection is symmetric up to roundoff
  for (int a = 0; a < smat.rows(); ++a)
    for (int b = 0; b < a; ++b) {
      const double v = 0.5 * (smat(a, b) + smat(b, a));
      smat(a, b) = v;
      smat(b, a) = v;
    }
  const SmallEig eig = sym_eig_small(smat); // descending

  const int r = q.dim();
  Block c(r, s);
  std::vector<double> values(s);
  for (int j = 0; j < s; ++j) {
    const int src = orientation == Orientation::Largest ? j : r - 1 - j;
    values[j] = eig.values[src];
    for (int t = 0; t < r; ++t) c(t, j) = eig.vectors(t, src);
  }

  RitzSet out;
  out.orientation = orientation;
  out.values = std::move(values);
  Block v = kernels::multiply(q.basis(), c);
  out.mv = kernels::multiply(mq, c);
  out.av = ctx.apply_a(v);
  out.residual_block = kernels::residual(out.mv, out.av, out.values);
  out.residual_norms = residual_norms_of(ctx, out.residual_block);
  out.vectors = Subspace(std::move(v), ip);
  return out;
}

RitzSet bpg_step(const RitzSet& cur, const EigContext& ctx, const Preconditioner& t,
                 double omega) {
  Block w = t.apply(cur.residual_block);
  if (omega != 1.0) {
    const std::vector<double> sc(w.cols(), omega);
    kernels::scale_cols(w, sc);
  }
  const Block trial = cur.vectors.basis().hcat(w);
  return rayleigh_ritz(trial, ctx, cur.dim(), cur.orientation);
}

RitzSet pinvit_block_step(const RitzSet& cur, const EigContext& ctx,
                          const Preconditioner& t, double omega) {
  Block w = t.apply(cur.residual_block);
  const Block trial = kernels::add_scaled(1.0, cur.vectors.basis(), -omega, w);
  return rayleigh_ritz(trial, ctx, cur.dim(), cur.orientation);
}

namespace {

bool phase_entered(const RitzSet& st, const Spectrum* ref) {
  if (ref == nullptr || ref->leading_count() < st.dim() + 1) return false;
  if (st.orientation == Orientation::Largest)
    return st.values.back() > ref->value(st.dim() + 1);
  return st.values.back() < ref->value(st.dim() + 1);
}

void record(IterTrace& trace, const RitzSet& st, const Spectrum* ref) {
  StepRow row;
  row.theta = st.values;
  row.resnorm = st.residual_norms;
  if (ref != nullptr && ref->leading_count() >= st.dim() + 1)
    row.phase = phase_entered(st, ref) ? 1 : 0;
  if (!trace.steps.empty()) {
    const auto& prev = trace.steps.back().theta;
    for (size_t i = 0; i < prev.size() && i < row.theta.size(); ++i) {
      const double slack = 1e-12 * std::fabs(prev[i]);
      const bool ok = st.orientation == Orientation::Largest
                          ? row.theta[i] >= prev[i] - slack
                          : row.theta[i] <= prev[i] + slack;
      if (!ok) trace.monotone = false;
    }
  }
  trace.steps.push_back(std::move(row));
}

} // namespace

RunResult run_iteration(const EigContext& ctx, const Preconditioner& t, double omega,
                        const RunConfig& cfg) {
  const int n = ctx.a->dim();
  RunResult out;
  IterTrace& trace = out.trace;
  trace.seed = cfg.seed;
  trace.s = cfg.s;

  Rng rng(cfg.seed);
  Block start(n, cfg.s);
  for (int j = 0; j < cfg.s; ++j)
    for (int i = 0; i < n; ++i) start(i, j) = rng.gaussian();

  try {
    RitzSet cur = rayleigh_ritz(start, ctx, cfg.s, cfg.orientation);
    record(trace, cur, cfg.reference);
    auto note_phase = [&](const RitzSet& st, int step) {
      if (trace.phase_entry < 0 && phase_entered(st, cfg.reference)) {
        trace.phase_entry = step;
        if (cfg.capture_phase_basis) out.phase_basis = st.vectors.basis();
      }
    };
    note_phase(cur, 0);

    for (int l = 1; l <= cfg.max_steps; ++l) {
      cur = cfg.mode == IterMode::Bpg ? bpg_step(cur, ctx, t, omega)
                                      : pinvit_block_step(cur, ctx, t, omega);
      record(trace, cur, cfg.reference);
      note_phase(cur, l);
      bool done = true;
      for (int i = 0; i < cfg.s; ++i)
        if (cur.residual_norms[i] > cfg.tol * std::fabs(cur.values[i])) {
          done = false;
          break;
        }
      if (done) break;
    }
    out.final_state = std::move(cur);
  } catch (const Error& e) {
    trace.complete = false;
    trace.error = e.what();
  }
  return out;
}

// ------------------------------------------------------------------- CSV

void write_trace_csv(const IterTrace& trace, const Spectrum* reference,
                     const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw Error("write_trace_csv: cannot open " + path);
  for (const auto& [k, v] : trace.echo) outf << "# " << k << " = " << v << "\n";
  outf << "# seed = " << trace.seed << "\n";
  outf << "# complete = " << (trace.complete ? "true" : "false") << "\n";
  if (!trace.error.empty()) outf << "# error = " << trace.error << "\n";
  if (trace.phase_entry >= 0) outf << "# phase_entry = " << trace.phase_entry << "\n";
  outf << "run_id,step,i,theta,err,resnorm,phase,gamma_tilde,dim_tilde,dim_hat\n";
  char buf[256];
  for (size_t l = 0; l < trace.steps.size(); ++l) {
    const StepRow& row = trace.steps[l];
    for (size_t i = 0; i < row.theta.size(); ++i) {
      std::string err_field;
      if (reference != nullptr &&
          reference->leading_count() >= static_cast<int>(i) + 1) {
        const double mu = reference->value(static_cast<int>(i) + 1);
        std::snprintf(buf, sizeof buf, "%.17g",
                      reference->descending ? mu - row.theta[i] : row.theta[i] - mu);
        err_field = buf;
      }
      std::string phase_field = row.phase >= 0 ? std::to_string(row.phase) : "";
      std::string g_field, dt_field, dh_field;
      const auto it = row.gamma.find(static_cast<int>(i) + 1);
      if (it != row.gamma.end()) {
        if (it->second.valid) {
          std::snprintf(buf, sizeof buf, "%.12g", it->second.gamma);
          g_field = buf;
        }
        dt_field = std::to_string(it->second.dim_tilde);
        dh_field = std::to_string(it->second.dim_hat);
      }
      std::snprintf(buf, sizeof buf, "%llu,%zu,%zu,%.17g,%s,%.6g,%s,%s,%s,%s\n",
                    static_cast<unsigned long long>(trace.seed), l, i + 1, row.theta[i],
                    err_field.c_str(), row.resnorm[i], phase_field.c_str(),
                    g_field.c_str(), dt_field.c_str(), dh_field.c_str());
      outf << buf;
    }
  }
  if (!outf) throw Error("write_trace_csv: write failed for " + path);
}

IterTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_trace_csv: cannot open " + path);
  IterTrace trace;
  std::string line;
  long lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& s) {
          const auto b = s.find_first_not_of(" \t");
          const auto e = s.find_last_not_of(" \t\r");
          s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        strip(key);
        strip(val);
        if (key == "seed") trace.seed = std::strtoull(val.c_str(), nullptr, 10);
        else if (key == "complete") trace.complete = (val == "true");
        else if (key == "phase_entry") trace.phase_entry = std::atoi(val.c_str());
        else if (key == "error") trace.error = val;
        else trace.echo[key] = val;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    while (f.size() < 10) f.emplace_back();
    const size_t step = std::strtoul(f[1].c_str(), nullptr, 10);
    const int i = std::atoi(f[2].c_str());
    const double theta = std::strtod(f[3].c_str(), nullptr);
    if (trace.steps.size() <= step) trace.steps.resize(step + 1);
    StepRow& row = trace.steps[step];
    if (static_cast<int>(row.theta.size()) < i) {
      row.theta.resize(i, 0.0);
      row.resnorm.resize(i, 0.0);
    }
    row.theta[i - 1] = theta;
    row.resnorm[i - 1] = std::strtod(f[5].c_str(), nullptr);
    if (!f[6].empty()) row.phase = std::atoi(f[6].c_str());
    if (!f[7].empty() || !f[8].empty()) {
      GammaCell cell;
      cell.valid = !f[7].empty();
      cell.gamma = f[7].empty() ? 0.0 : std::strtod(f[7].c_str(), nullptr);
      if (!f[8].empty()) cell.dim_tilde = std::atoi(f[8].c_str());
      if (!f[9].empty()) cell.dim_hat = std::atoi(f[9].c_str());
      row.gamma[i] = cell;
    }
    trace.s = std::max(trace.s, i);
  }
  return trace;
}

} // namespace bpg
