#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mgmpcg/csr_matrix.hpp"
#include "mgmpcg/vector_ops.hpp"

namespace mgmpcg {

/// Small symmetric matrix (a Gram matrix P^T A P in practice), row-major.
class DenseSpd {
 public:
  DenseSpd(std::size_t dim, std::vector<double> values);
  explicit DenseSpd(std::size_t dim) : DenseSpd(dim, std::vector<double>(dim * dim, 0.0)) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }
  std::span<const double> values() const noexcept { return values_; }
  double max_abs() const { return mgmpcg::max_abs(values_); }

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

/// n x k block of column vectors stored column-major. Holds the per-level
/// preconditioned residuals Z_k and the search directions P_k.
class DirectionBlock {
 public:
  DirectionBlock() = default;
  DirectionBlock(std::size_t nrows, std::size_t ncols);

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return ncols_; }

  std::span<double> column(std::size_t j) { return {data_.data() + j * nrows_, nrows_}; }
  std::span<const double> column(std::size_t j) const { return {data_.data() + j * nrows_, nrows_}; }

  /// Y = B c
  Vector combine(std::span<const double> coeffs) const;
  /// B^T x
  Vector transpose_times(std::span<const double> x) const;
  /// Row sums, i.e. B * ones.
  Vector column_sum() const;
  double max_abs() const { return mgmpcg::max_abs(data_); }

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<double> data_;
};

/// Columnwise A * B.
DirectionBlock apply(const CsrMatrix& a, const DirectionBlock& b);

/// X^T Y as a dense (X.ncols x Y.ncols) row-major array.
std::vector<double> cross_gram(const DirectionBlock& x, const DirectionBlock& y);

/// P^T (A P) symmetrized; `ap` must be the columnwise image A P.
DenseSpd block_gram(const DirectionBlock& p, const DirectionBlock& ap);

/// Eigen-decomposition of a symmetric Gram matrix with a relative drop
/// tolerance. Eigenvalues <= drop_tol * lambda_max are treated as zero, so
/// solve() applies the Moore-Penrose pseudoinverse on the numerical range.
class GramFactor {
 public:
  GramFactor() = default;
  GramFactor(const DenseSpd& g, double drop_tol);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rank_; }
  bool rank_deficient() const noexcept { return rank_ < dim_; }
  double lambda_max() const noexcept { return lambda_max_; }
  double lambda_min() const noexcept { return lambda_min_; }

  Vector solve(std::span<const double> rhs) const;

 private:
  std::size_t dim_ = 0;
  std::size_t rank_ = 0;
  double lambda_max_ = 0.0;
  double lambda_min_ = 0.0;
  std::vector<double> eigvecs_;      // column-major dim x dim
  std::vector<double> inv_eigvals_;  // zero for dropped modes
};

struct GramSolution {
  Vector alpha;
  bool rank_deficient = false;
  std::size_t rank = 0;
};

/// Minimum-norm solution of G alpha = rhs.
GramSolution gram_solve(const DenseSpd& g, std::span<const double> rhs, double drop_tol = 1e-12);

}  // namespace mgmpcg
