#include "mgmpcg/smoothers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <string>

namespace mgmpcg {

SsorSmoother::SsorSmoother(const CsrMatrix& a, double omega, int nu)
    : a_(&a), omega_(omega), nu_(nu) {
  require(a.nrows() == a.ncols(), ErrorCode::dimension_mismatch, "SsorSmoother: matrix not square");
  require(omega > 0.0 && omega < 2.0, ErrorCode::invalid_argument,
          "SsorSmoother: omega must lie in (0,2)");
  require(nu >= 1, ErrorCode::invalid_argument, "SsorSmoother: nu must be >= 1");
  inv_diag_.resize(a.nrows());
  for (Index i = 0; i < a.nrows(); ++i) {
    const double d = a.diagonal(i);
    require(d != 0.0, ErrorCode::invalid_argument,
            "SsorSmoother: zero diagonal entry in row " + std::to_string(i));
    inv_diag_[i] = 1.0 / d;
  }
}

void SsorSmoother::smooth(std::span<const double> rhs, std::span<double> x, int steps) const {
  const CsrMatrix& a = *a_;
  require(rhs.size() == a.nrows() && x.size() == a.nrows(), ErrorCode::dimension_mismatch,
          "SsorSmoother: vector length does not match the level");
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  const Index n = a.nrows();
  auto relax = [&](Index i) {
    double s = rhs[i];
    for (Index k = offsets[i]; k < offsets[i + 1]; ++k) s -= vals[k] * x[cols[k]];
    x[i] += omega_ * s * inv_diag_[i];
  };
  for (int step = 0; step < steps; ++step) {
    for (Index i = 0; i < n; ++i) relax(i);
    for (Index i = n; i-- > 0;) relax(i);
  }
}

Vector SsorSmoother::apply(std::span<const double> rhs) const {
  Vector x(a_->nrows(), 0.0);
  smooth(rhs, x, nu_);
  return x;
}

Vector ssor_apply(const SsorSmoother& s, std::span<const double> rhs) { return s.apply(rhs); }

Vector ssor_smooth(const SsorSmoother& s, std::span<const double> rhs, std::span<const double> c0) {
  Vector x(c0.begin(), c0.end());
  s.smooth(rhs, x, s.nu());
  return x;
}

std::pair<double, double> smoother_as_operator_symmetry_check(const SsorSmoother& s,
                                                              std::span<const double> u,
                                                              std::span<const double> v) {
  return {dot(u, s.apply(v)), dot(v, s.apply(u))};
}

CoarseSolver::CoarseSolver(const CsrMatrix& a) : n_(a.nrows()) {
  require(a.nrows() == a.ncols(), ErrorCode::dimension_mismatch, "CoarseSolver: matrix not square");
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n_; ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rc[k])) = rv[k];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  require(llt.info() == Eigen::Success, ErrorCode::not_spd,
          "CoarseSolver: Cholesky failed, coarse operator is not SPD");
  const Eigen::MatrixXd l = llt.matrixL();
  factor_.assign(l.data(), l.data() + n_ * n_);
}

Vector CoarseSolver::solve(std::span<const double> rhs) const {
  require(rhs.size() == n_, ErrorCode::dimension_mismatch, "CoarseSolver: rhs length mismatch");
  const auto n = static_cast<Eigen::Index>(n_);
  const Eigen::Map<const Eigen::MatrixXd> l(factor_.data(), n, n);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
  l.triangularView<Eigen::Lower>().solveInPlace(y);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(y);
  return Vector(y.data(), y.data() + n);
}

}  // namespace mgmpcg
