#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mgmpcg/vector_ops.hpp"

namespace mgmpcg {

using Index = std::size_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Immutable after construction; the
/// constructor validates the CSR layout (monotone offsets, strictly
/// increasing column indices per row, columns in range).
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets, std::vector<Index> col_indices,
            std::vector<double> values, bool symmetric = false);

  /// Duplicate (row, col) pairs are summed. Explicit zeros are kept.
  static CsrMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries,
                                 bool symmetric = false);
  static CsrMatrix identity(Index n);

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Index nnz() const noexcept { return values_.size(); }
  bool symmetric() const noexcept { return symmetric_; }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(Index i) const {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// Entry lookup by binary search; zero when not stored.
  double at(Index i, Index j) const;
  double diagonal(Index i) const { return at(i, i); }
  Vector diagonal() const;

  /// Largest |a_ij| over stored entries.
  double max_abs() const;

  /// Checks |a_ij - a_ji| <= tol * max(1, |a_ij|) over the stored entries of
  /// both patterns.
  bool is_symmetric(double tol = 1e-12) const;

  CsrMatrix with_symmetric_flag(bool flag) const;

 private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

/// y = A x
Vector spmv(const CsrMatrix& a, std::span<const double> x);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

CsrMatrix transpose(const CsrMatrix& a);

/// C = A B
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);

/// Scaled sum alpha*A + beta*B on the union pattern.
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0, double beta = 1.0);

/// R A P with R = P^T. The result is symmetrized exactly (averaged with its
/// transpose) and flagged symmetric.
CsrMatrix galerkin_triple_product(const CsrMatrix& r, const CsrMatrix& a, const CsrMatrix& p);

/// Max entrywise |A - B| over the union pattern.
double max_abs_difference(const CsrMatrix& a, const CsrMatrix& b);

}  // namespace mgmpcg
