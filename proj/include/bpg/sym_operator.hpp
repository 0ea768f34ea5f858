#pragma once

#include <functional>
#include <vector>

#include "bpg/block.hpp"

namespace bpg {

enum class Storage { Dense, Diagonal, Csr, Banded };
enum class Definiteness { PositiveDefinite, Indefinite, Unknown };

/// Symmetric matrix with one of four storage layouts:
///  - Dense:    packed lower triangle, n(n+1)/2 entries
///  - Diagonal: n entries
///  - Csr:      upper triangle in CSR, column indices strictly increasing
///              per row; a full-pattern mirror is kept for row-parallel
///              products
///  - Banded:   lower bands, row-major, bw+1 slots per row
/// Instances are immutable after construction and safe to share.
class SymOperator {
public:
  static SymOperator identity(int n);
  static SymOperator diagonal(std::vector<double> d,
                              Definiteness hint = Definiteness::Unknown);
  /// packed lower triangle, row-major: a(i,j) at [i(i+1)/2 + j], j <= i
  static SymOperator dense_lower(int n, std::vector<double> packed,
                                 Definiteness hint = Definiteness::Unknown);
  static SymOperator dense_from(const Block& full_symmetric,
                                Definiteness hint = Definiteness::Unknown);
  /// upper-triangle CSR (diagonal included in each row's first slot when present)
  static SymOperator csr_upper(int n, std::vector<int> row_ptr, std::vector<int> col_idx,
                               std::vector<double> val,
                               Definiteness hint = Definiteness::Unknown);
  static SymOperator banded(int n, int bandwidth, std::vector<double> bands,
                            Definiteness hint = Definiteness::Unknown);

  int dim() const { return n_; }
  Storage storage() const { return storage_; }
  Definiteness definiteness() const { return hint_; }
  int bandwidth() const;

  void apply(const Block& x, Block& y) const;
  Block apply(const Block& x) const;

  /// a(i,i)
  double diag_entry(int i) const;
  double max_abs_entry() const;
  /// 2-norm of column j (full column, both triangles)
  double column_norm(int j) const;
  /// visit stored lower-triangle entries (i >= j), including the diagonal
  void for_each_lower(const std::function<void(int i, int j, double v)>& f) const;
  /// lower-triangle column j (rows j..n-1), nonzeros only, ascending row
  std::vector<std::pair<int, double>> lower_column(int j) const;

  /// dense mirror for small problems and tests
  Block to_dense(int max_dim = 4000) const;

  /// this - sigma * other, materialized (storage follows the denser operand)
  SymOperator shifted(double sigma, const SymOperator& other) const;

  const std::vector<double>& diag_values() const { return diag_; }
  const std::vector<double>& band_values() const { return band_; }
  bool is_identity() const;

private:
  friend class CholFactor;
  SymOperator() = default;
  void build_csr_mirror();

  int n_ = 0;
  Storage storage_ = Storage::Diagonal;
  Definiteness hint_ = Definiteness::Unknown;

  std::vector<double> dense_;                    // packed lower
  std::vector<double> diag_;                     // diagonal
  std::vector<int> csr_ptr_, csr_idx_;           // upper triangle
  std::vector<double> csr_val_;
  std::vector<int> adj_ptr_, adj_idx_;           // full-pattern mirror
  std::vector<double> adj_val_;
  int bandwidth_ = 0;
  std::vector<double> band_;                     // lower bands
};

} // namespace bpg
