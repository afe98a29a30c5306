#include "mgmpcg/dense.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace mgmpcg {

DenseSpd::DenseSpd(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  require(dim_ >= 1, ErrorCode::invalid_argument, "DenseSpd: dim must be >= 1");
  require(values_.size() == dim_ * dim_, ErrorCode::invalid_argument,
          "DenseSpd: values must have dim*dim entries");
  const double scale = std::max(1.0, max_abs());
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      require(std::abs(values_[i * dim_ + j] - values_[j * dim_ + i]) <= 1e-12 * scale,
              ErrorCode::invalid_argument, "DenseSpd: matrix is not symmetric");
    }
  }
}

DirectionBlock::DirectionBlock(std::size_t nrows, std::size_t ncols)
    : nrows_(nrows), ncols_(ncols), data_(nrows * ncols, 0.0) {
  require(ncols_ >= 1, ErrorCode::invalid_argument, "DirectionBlock: needs at least one column");
}

Vector DirectionBlock::combine(std::span<const double> coeffs) const {
  require(coeffs.size() == ncols_, ErrorCode::dimension_mismatch,
          "DirectionBlock::combine: coefficient count mismatch");
  Vector y(nrows_, 0.0);
  for (std::size_t j = 0; j < ncols_; ++j) axpy(coeffs[j], column(j), y);
  return y;
}

Vector DirectionBlock::transpose_times(std::span<const double> x) const {
  Vector y(ncols_);
  for (std::size_t j = 0; j < ncols_; ++j) y[j] = dot(column(j), x);
  return y;
}

Vector DirectionBlock::column_sum() const { return combine(Vector(ncols_, 1.0)); }

DirectionBlock apply(const CsrMatrix& a, const DirectionBlock& b) {
  DirectionBlock out(a.nrows(), b.ncols());
  for (std::size_t j = 0; j < b.ncols(); ++j) spmv(a, b.column(j), out.column(j));
  return out;
}

std::vector<double> cross_gram(const DirectionBlock& x, const DirectionBlock& y) {
  require(x.nrows() == y.nrows(), ErrorCode::dimension_mismatch, "cross_gram: row mismatch");
  std::vector<double> g(x.ncols() * y.ncols());
  for (std::size_t i = 0; i < x.ncols(); ++i) {
    for (std::size_t j = 0; j < y.ncols(); ++j) g[i * y.ncols() + j] = dot(x.column(i), y.column(j));
  }
  return g;
}

DenseSpd block_gram(const DirectionBlock& p, const DirectionBlock& ap) {
  require(p.ncols() == ap.ncols(), ErrorCode::dimension_mismatch, "block_gram: column mismatch");
  const std::size_t k = p.ncols();
  std::vector<double> g = cross_gram(p, ap);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double s = 0.5 * (g[i * k + j] + g[j * k + i]);
      g[i * k + j] = s;
      g[j * k + i] = s;
    }
  }
  return DenseSpd(k, std::move(g));
}

GramFactor::GramFactor(const DenseSpd& g, double drop_tol) : dim_(g.dim()) {
  require(drop_tol >= 0.0, ErrorCode::invalid_argument, "GramFactor: drop_tol must be >= 0");
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      mat(g.values().data(), static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat);
  require(eig.info() == Eigen::Success, ErrorCode::singular_system,
          "GramFactor: eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  lambda_min_ = lambda(0);
  lambda_max_ = lambda(static_cast<Eigen::Index>(dim_) - 1);
  const double cutoff = drop_tol * lambda_max_;
  inv_eigvals_.assign(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double l = lambda(static_cast<Eigen::Index>(i));
    if (lambda_max_ > 0.0 && l > cutoff) {
      inv_eigvals_[i] = 1.0 / l;
      ++rank_;
    }
  }
  eigvecs_.assign(eig.eigenvectors().data(), eig.eigenvectors().data() + dim_ * dim_);
}

Vector GramFactor::solve(std::span<const double> rhs) const {
  require(rhs.size() == dim_, ErrorCode::dimension_mismatch, "GramFactor::solve: size mismatch");
  // alpha = V diag(1/lambda) V^T rhs over the retained modes
  Vector alpha(dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    if (inv_eigvals_[k] == 0.0) continue;
    std::span<const double> v(eigvecs_.data() + k * dim_, dim_);
    const double coef = dot(v, rhs) * inv_eigvals_[k];
    axpy(coef, v, alpha);
  }
  return alpha;
}

GramSolution gram_solve(const DenseSpd& g, std::span<const double> rhs, double drop_tol) {
  require(g.dim() == rhs.size(), ErrorCode::dimension_mismatch, "gram_solve: size mismatch");
  const GramFactor f(g, drop_tol);
  return GramSolution{f.solve(rhs), f.rank_deficient(), f.rank()};
}

}  // namespace mgmpcg
