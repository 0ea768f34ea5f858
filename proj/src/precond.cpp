#include "bpg/precond.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "bpg/common.hpp"
#include "bpg/kernels.hpp"
#include "bpg/lanczos.hpp"
#include "bpg/matrix_market.hpp"
#include "bpg/rng.hpp"

namespace bpg {

std::string Preconditioner::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::ExactInverse: os << "exact-inverse"; break;
    case Kind::Identity: os << "identity"; break;
    case Kind::IcThreshold: os << "ic-threshold(droptol=" << param_ << ")"; break;
    case Kind::PerturbedIdentity: os << "perturbed-identity(eta=" << param_ << ")"; break;
    case Kind::ExternalFile: os << "external-file"; break;
  }
  if (scale_ != 1.0) os << " x" << scale_;
  return os.str();
}

Block Preconditioner::apply(const Block& r) const {
  if (r.rows() != n_) throw DimensionError("preconditioner apply: row mismatch");
  Block y;
  switch (kind_) {
    case Kind::Identity: y = r; break;
    case Kind::ExactInverse:
    case Kind::ExternalFile: y = chol_->solve(r); break;
    case Kind::IcThreshold: y = ic_->solve(r); break;
    case Kind::PerturbedIdentity: y = mat_->apply(r); break;
  }
  if (scale_ != 1.0) {
    const std::vector<double> s(r.cols(), scale_);
    kernels::scale_cols(y, s);
  }
  return y;
}

Preconditioner Preconditioner::scaled(double c) const {
  if (!(c > 0.0)) throw ParamError("preconditioner scale must be positive");
  Preconditioner p = *this;
  p.scale_ *= c;
  return p;
}

Preconditioner make_exact_inverse(const SymOperator& a) {
  Preconditioner p;
  p.kind_ = Preconditioner::Kind::ExactInverse;
  p.n_ = a.dim();
  p.chol_ = std::make_shared<CholFactor>(CholFactor::factor(a));
  return p;
}

Preconditioner make_identity(int n) {
  Preconditioner p;
  p.kind_ = Preconditioner::Kind::Identity;
  p.n_ = n;
  return p;
}

Preconditioner make_ic_threshold(const SymOperator& a, double droptol) {
  Preconditioner p;
  p.kind_ = Preconditioner::Kind::IcThreshold;
  p.n_ = a.dim();
  p.param_ = droptol;
  p.ic_ = std::make_shared<IcFactor>(IcFactor::factor(a, droptol));
  return p;
}

Preconditioner make_perturbed_identity(int n, double eta, double density,
                                       std::uint64_t seed) {
  if (eta < 0.0) throw ParamError("perturbed-identity: eta must be >= 0");
  if (density <= 0.0) density = 5.0 / n;

  // E: round(density * n^2) positions without replacement, values U(0, eta)
  const long long cells = static_cast<long long>(n) * n;
  long long draws = std::llround(density * double(cells));
  draws = std::min(draws, cells);

  Rng rng(seed);
  std::map<std::pair<int, int>, double> upper; // accumulated I + E + E^T, upper part
  for (int i = 0; i < n; ++i) upper[{i, i}] = 1.0;
  std::map<long long, double> positions;
  while (static_cast<long long>(positions.size()) < draws) {
    const long long cell = static_cast<long long>(rng.integer(cells));
    if (positions.count(cell)) continue;
    positions[cell] = rng.uniform(0.0, eta);
  }
  for (const auto& [cell, v] : positions) {
    const int i = static_cast<int>(cell / n);
    const int j = static_cast<int>(cell % n);
    // E contributes at (i,j), E^T at (j,i); fold both into the upper triangle
    const auto key = i <= j ? std::make_pair(i, j) : std::make_pair(j, i);
    upper[key] += (i == j) ? 2.0 * v : v;
  }

  std::vector<int> ptr(n + 1, 0), idx;
  std::vector<double> val;
  for (const auto& [k, v] : upper) ptr[k.first + 1]++;
  for (int i = 0; i < n; ++i) ptr[i + 1] += ptr[i];
  for (const auto& [k, v] : upper) {
    idx.push_back(k.second);
    val.push_back(v);
  }
  auto mat = std::make_shared<SymOperator>(
      SymOperator::csr_upper(n, std::move(ptr), std::move(idx), std::move(val)));

  // positive definiteness: Gershgorin first, spectral probe as fallback
  std::vector<double> radius(n, 0.0), diag(n, 0.0);
  mat->for_each_lower([&](int i, int j, double v) {
    if (i == j) {
      diag[i] = v;
    } else {
      radius[i] += std::fabs(v);
      radius[j] += std::fabs(v);
    }
  });
  bool gershgorin_ok = true;
  for (int i = 0; i < n; ++i)
    if (!(diag[i] - radius[i] > 0.0)) {
      gershgorin_ok = false;
      break;
    }
  if (!gershgorin_ok) {
    const VecApply op = [&mat](const Block& x, Block& y) { mat->apply(x, y); };
    LanczosOptions lo;
    lo.want_low = 1;
    lo.tol = 1e-6;
    lo.max_iter = 10 * n;
    const LanczosResult r = lanczos_extreme(op, InnerProduct::euclidean(), n, lo);
    if (!(r.low_values.at(0) > 0.0))
      throw Error("perturbed-identity: matrix is not positive definite (smallest "
                  "eigenvalue " +
                  std::to_string(r.low_values.at(0)) + "); use a smaller eta");
  }

  Preconditioner p;
  p.kind_ = Preconditioner::Kind::PerturbedIdentity;
  p.n_ = n;
  p.param_ = eta;
  p.mat_ = std::move(mat);
  return p;
}

Preconditioner make_external(const std::string& mtx_path) {
  const SymOperator k = mm_read(mtx_path);
  Preconditioner p;
  p.kind_ = Preconditioner::Kind::ExternalFile;
  p.n_ = k.dim();
  p.chol_ = std::make_shared<CholFactor>(CholFactor::factor(k));
  return p;
}

PrecondQuality assess_quality(const Preconditioner& t, const SymOperator& a, double tol) {
  if (t.dim() != a.dim()) throw DimensionError("assess_quality: dimension mismatch");
  const int n = a.dim();
  const InnerProduct ip = InnerProduct::weighted(a);
  const VecApply op = [&](const Block& x, Block& y) { y = t.apply(a.apply(x)); };

  LanczosOptions opts;
  opts.want_high = 1;
  opts.want_low = 1;
  opts.tol = tol;
  opts.max_iter = std::max(200, 6 * n);
  opts.seed = 0x5eedULL + static_cast<std::uint64_t>(n);
  LanczosResult r;
  try {
    r = lanczos_extreme(op, ip, n, opts);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("assess_quality: Lanczos stagnated: ") + e.what(),
                           e.achieved_residual);
  }
  PrecondQuality q;
  q.alpha = r.low_values.at(0);
  q.beta = r.high_values.at(0);
  if (!(q.alpha > 0.0))
    throw Error("assess_quality: T A has non-positive eigenvalue " +
                std::to_string(q.alpha));
  q.omega = 2.0 / (q.beta + q.alpha);
  q.gamma = (q.beta - q.alpha) / (q.beta + q.alpha);
  return q;
}

double symmetry_defect(const Preconditioner& t, int probes, std::uint64_t seed) {
  Rng rng(seed);
  const int n = t.dim();
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    Block x(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = rng.gaussian();
      y(i, 0) = rng.gaussian();
    }
    const Block tx = t.apply(x);
    const Block ty = t.apply(y);
    const double a = kernels::gram(tx, y)(0, 0);
    const double b = kernels::gram(x, ty)(0, 0);
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    worst = std::max(worst, std::fabs(a - b) / scale);
  }
  return worst;
}

} // namespace bpg
