#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "bpg/cholesky.hpp"
#include "bpg/ic.hpp"
#include "bpg/sym_operator.hpp"

namespace bpg {

/// Symmetric positive definite preconditioner; apply() is the action of the
/// (unscaled) operator on a block. Instances are immutable and cheap to copy.
class Preconditioner {
public:
  enum class Kind { ExactInverse, IcThreshold, PerturbedIdentity, Identity, ExternalFile };

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  double scale() const { return scale_; }
  std::string describe() const;

  Block apply(const Block& r) const;

  /// c * this, c > 0
  Preconditioner scaled(double c) const;

  /// ic-threshold internals, for fill diagnostics
  const IcFactor* ic() const { return ic_.get(); }

private:
  friend Preconditioner make_exact_inverse(const SymOperator&);
  friend Preconditioner make_identity(int);
  friend Preconditioner make_ic_threshold(const SymOperator&, double);
  friend Preconditioner make_perturbed_identity(int, double, double, std::uint64_t);
  friend Preconditioner make_external(const std::string&);

  Preconditioner() = default;

  Kind kind_ = Kind::Identity;
  int n_ = 0;
  double scale_ = 1.0;
  double param_ = 0.0; // droptol or eta, for describe()
  std::shared_ptr<const CholFactor> chol_;
  std::shared_ptr<const IcFactor> ic_;
  std::shared_ptr<const SymOperator> mat_; // multiplicative form (perturbed identity)
};

/// T = A^{-1} through a Cholesky factorization of A.
Preconditioner make_exact_inverse(const SymOperator& a);

Preconditioner make_identity(int n);

/// Incomplete Cholesky of A with relative threshold dropping.
Preconditioner make_ic_threshold(const SymOperator& a, double droptol);

/// N = I + E + E^T with E sparse random: positions drawn uniformly without
/// replacement at the given expected density (pass <= 0 for the default
/// 5/n), values uniform in (0, eta). Verified positive definite by a
/// Gershgorin test, falling back to a smallest-eigenvalue probe; failure
/// raises an error advising a smaller eta.
Preconditioner make_perturbed_identity(int n, double eta, double density,
                                       std::uint64_t seed);

/// SPD matrix loaded from a MatrixMarket file, applied through its
/// factorization.
Preconditioner make_external(const std::string& mtx_path);

struct PrecondQuality {
  double alpha; // smallest eigenvalue of T A
  double beta;  // largest
  double omega; // 2 / (beta + alpha)
  double gamma; // (beta - alpha) / (beta + alpha)
};

/// Extreme eigenvalues of T A by Lanczos in the A-inner product applied to
/// x -> T(Ax), then the optimal scaling and the quality ratio.
PrecondQuality assess_quality(const Preconditioner& t, const SymOperator& a,
                              double tol = 1e-8);

/// max |<Tx, y> - <x, Ty>| / scale over seeded random probes; symmetry check
/// used by the tests.
double symmetry_defect(const Preconditioner& t, int probes, std::uint64_t seed);

} // namespace bpg
