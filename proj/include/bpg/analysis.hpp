#pragma once

#include <string>
#include <vector>

#include "bpg/ritz.hpp"

namespace bpg {

/// Invariant-subspace split for skipping a cluster: the "skipped" block
/// holds eigenvectors j-s+i+1 .. j, the "kept" block holds j-s+1 .. j-s+i
/// (both 1-based, A-orthonormal columns from the reference spectrum). The
/// two auxiliary complements are the A-orthogonal complements of these
/// blocks.
struct InvariantSplit {
  int i = 0, j = 0, s = 0;
  Block skipped; // s-i columns
  Block kept;    // i columns
};

InvariantSplit make_split(const Spectrum& sp, int i, int j, int s);

/// Orthonormal basis of { y in span(Y) : y perp_G span(block) }, computed as
/// the null space of the coefficient matrix block^T G Y. The threshold for
/// a zero singular value is 1e-10 relative on the Gram spectrum.
Subspace intersect(const Subspace& y, const Block& block, const InnerProduct& ip);

struct GammaValue {
  double value = 0.0;
  bool valid = false;
  std::string reason; // set when invalid
};

/// Quality sample from the auxiliary pair (Y~, U~): with W = A^{-1} M Y~,
/// R~ = W - Y~ (Y~^* M Y~) and U the A-orthogonal projection of W onto the
/// U~ space (orthonormalized), the value is the largest A-weighted singular
/// value of (W - U U^* M Y~)(R~^* A R~)^{-1/2}. Rank deficiency of R~ or of
/// the projection marks the sample invalid instead of throwing.
GammaValue gamma_tilde(const Subspace& y_tilde, const Subspace& u_space,
                       const EigContext& ctx);

struct GammaSample {
  int step = 0;
  int dim_tilde = -1;
  int dim_hat = -1;
  int dim_u_tilde = -1;
  double gamma = 0.0;
  bool valid = false;
  std::string reason;
  double partial_consistency = -1.0; // sin of worst angle in the reconstruction check
};

struct AuxState {
  RitzSet ritz;
};

/// One step of the two-track auxiliary iteration: split the current iterate
/// and the updated block U = V diag(theta) + T(MV - AV diag(theta)) by the
/// invariant complements, run the two partial extractions, then recombine.
/// Emits the gamma sample measured on the pre-step subspaces. When the
/// post-split dimensions match (i, s-i), the sample also carries a
/// consistency angle comparing the recombined iterate's split against the
/// partial extraction outputs.
std::pair<AuxState, GammaSample> aux_step(const AuxState& cur, const EigContext& ctx,
                                          const Preconditioner& t, double omega,
                                          const InvariantSplit& split);

/// Run the auxiliary iteration from a start basis for a number of steps,
/// collecting one sample per step. Samples whose normalizing factor has
/// fallen under the roundoff floor (residual scale below noise_floor
/// relative to the image scale) are flagged invalid.
std::vector<GammaSample> aux_run(const Block& start_basis, const EigContext& ctx,
                                 const Preconditioner& t, double omega,
                                 const InvariantSplit& split, int steps,
                                 double noise_floor = 1e-7);

// ----------------------------------------------------------------- bounds

enum class BoundKind { Lm2e1, Lm2e2, Thm2e1, Thm2e2, Thm2e3, Neighbor, Bpsde };

std::string bound_kind_name(BoundKind k);
BoundKind bound_kind_from(const std::string& name);

/// kappa_i = (mu_{j+1} - mu_n) / (mu_{j-s+i} - mu_n) on a descending
/// spectrum (1-based indices). Throws on a degenerate denominator.
double kappa(const Spectrum& sp, int i, int j, int s);

/// ((kappa + q(2-kappa)) / ((2-kappa) + q kappa)); reduces to
/// kappa/(2-kappa) at q = 0.
double conv_factor(double kappa_value, double q);

/// c * (mu_ref - mu_lower) / (1 + c): the largest possible distance from
/// mu_ref over Ritz values obeying the distance-ratio bound c.
double ratio_to_error(double ratio_bound, double mu_ref, double mu_lower);

struct BoundCurve {
  BoundKind kind = BoundKind::Thm2e1;
  int i = 0, j = 0, s = 0;
  double kappa = 0.0;
  double q = 0.0;
  double mu_ref = 0.0, mu_lower = 0.0;
  double theta0 = 0.0; // reset-origin Ritz value the initial ratio uses
  bool defined = true;
  std::string note;
  std::vector<double> ratio_bounds; // index = steps since the reset origin
  std::vector<double> error_bounds;
};

/// Multi-step bound evaluation. theta_s0 is the s-th Ritz value at the
/// reset origin and must lie in the interval the kind requires. The
/// neighbor variant comes back flagged undefined when mu_i and mu_{i+1}
/// coincide. For bpsde the spectrum is read in ascending orientation.
BoundCurve bound_curve(BoundKind kind, const Spectrum& sp, int i, int j, int s, double q,
                       double theta_s0, int steps);

struct Violation {
  BoundKind kind;
  int i = 0;
  int step = 0; // absolute trace step
  double observed = 0.0;
  double bound = 0.0;
};

struct ValidationReport {
  bool applicable = false; // phase was entered
  int phase_entry = -1;
  long checked = 0;
  std::vector<Violation> violations;
  bool pass() const { return !applicable || violations.empty(); }
  std::string text() const;
};

/// Compare observed distance ratios against the curves from the phase-entry
/// reset onward; tolerance 1e-9 absolute on ratios, switching to the error
/// form when theta reaches mu_ref to within 1e-12 relative.
ValidationReport validate_trace(const IterTrace& trace, const std::vector<BoundCurve>& curves,
                                const Spectrum& sp);

/// Stepwise check of the single-step sharp estimate on the s-th Ritz value:
/// locates the spectral interval of theta_s at every step (full descending
/// spectrum required) and verifies the one-step ratio contraction with the
/// supplied quality parameter.
ValidationReport check_single_step_sharp(const IterTrace& trace, const Spectrum& sp,
                                         double gamma_quality);

/// Bound CSV: kind,i,j,s,kappa,q,step,ratio_bound,error_bound
void write_bounds_csv(const std::vector<BoundCurve>& curves, const std::string& path,
                      const std::map<std::string, std::string>& echo = {});
std::vector<BoundCurve> read_bounds_csv(const std::string& path);

} // namespace bpg
