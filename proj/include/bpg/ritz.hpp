#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpg/cholesky.hpp"
#include "bpg/oracle.hpp"
#include "bpg/precond.hpp"
#include "bpg/subspace.hpp"

namespace bpg {

enum class Orientation { Largest, Smallest };
enum class ResNorm { AInv, Two };

/// Bundled pair context. All Ritz machinery works on the pair (M, A) with
/// A-orthonormal bases; the standard single-matrix case is the pair (A, I).
/// A nonzero shift replaces M by M - shift*A in every product.
struct EigContext {
  const SymOperator* m = nullptr;
  const SymOperator* a = nullptr;
  double shift = 0.0;
  const CholFactor* a_chol = nullptr; // enables A^{-1}-norm residuals and A-solves
  ResNorm resnorm = ResNorm::AInv;

  Block apply_m(const Block& x) const;
  Block apply_a(const Block& x) const;
};

struct RitzSet {
  Subspace vectors;                   // A-orthonormal Ritz vectors
  std::vector<double> values;         // sorted per orientation
  Block mv, av;                       // cached products with the basis
  Block residual_block;               // M V - A V diag(values)
  std::vector<double> residual_norms; // per column, per ctx.resnorm
  Orientation orientation = Orientation::Largest;

  int dim() const { return vectors.dim(); }
};

/// A-orthonormalize the trial block (rank-truncating at the 1e-13*n pivot
/// threshold), project the pair, solve the small problem, keep the s Ritz
/// pairs at the requested end. Throws RankError when the trial space has
/// numerical rank below s.
RitzSet rayleigh_ritz(const Block& trial, const EigContext& ctx, int s,
                      Orientation orientation = Orientation::Largest);

/// One step of the gradient iteration with implicitly optimized step sizes:
/// extraction from span{V, T R} with T = omega * precond.
RitzSet bpg_step(const RitzSet& cur, const EigContext& ctx, const Preconditioner& t,
                 double omega);

/// One step of the fixed-trial-space iteration on span{X - T R}; standard
/// problem form, with ctx the pair (A, I) and ascending Ritz values.
RitzSet pinvit_block_step(const RitzSet& cur, const EigContext& ctx,
                          const Preconditioner& t, double omega);

enum class IterMode { Bpg, Pinvit };

struct RunConfig {
  int s = 6;
  int max_steps = 200;
  double tol = 1e-10; // relative residual stopping tolerance
  std::uint64_t seed = 1;
  IterMode mode = IterMode::Bpg;
  Orientation orientation = Orientation::Largest;
  const Spectrum* reference = nullptr; // enables err and phase columns
  bool capture_phase_basis = false;
};

/// gamma-tilde measurement attached to a trace row for one tracked index
struct GammaCell {
  double gamma = 0.0;
  int dim_tilde = -1;
  int dim_hat = -1;
  int dim_u_tilde = -1;
  bool valid = false;
};

struct StepRow {
  std::vector<double> theta;
  std::vector<double> resnorm;
  int phase = -1;                // 1 once theta_s passed mu_{s+1}, 0 before, -1 unknown
  std::map<int, GammaCell> gamma; // keyed by tracked index i (1-based)
};

struct IterTrace {
  std::uint64_t seed = 0;
  int s = 0;
  bool complete = true;
  std::string error;
  int phase_entry = -1; // step of first theta_s > mu_{s+1}; -1 if never
  std::vector<StepRow> steps;
  std::map<std::string, std::string> echo; // resolved configuration
  bool monotone = true; // no recorded step decreased a Ritz value beyond 1e-12 rel

  int last_step() const { return static_cast<int>(steps.size()) - 1; }
};

struct RunResult {
  IterTrace trace;
  std::optional<Block> phase_basis; // iterate at phase entry
  RitzSet final_state;
};

/// Seeded run: Gaussian start, A-orthonormalization, then bpg_step (or
/// pinvit) until max_steps or until every residual norm falls below
/// tol * |theta_i|. A failure mid-run still returns the partial trace,
/// flagged incomplete.
RunResult run_iteration(const EigContext& ctx, const Preconditioner& t, double omega,
                        const RunConfig& cfg);

/// Trace CSV: columns run_id,step,i,theta,err,resnorm,phase,gamma_tilde,
/// dim_tilde,dim_hat with empty fields where a quantity was not computed.
void write_trace_csv(const IterTrace& trace, const Spectrum* reference,
                     const std::string& path);
IterTrace read_trace_csv(const std::string& path);

} // namespace bpg
