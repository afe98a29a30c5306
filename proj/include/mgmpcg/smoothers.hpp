#pragma once

#include <span>
#include <utility>

#include "mgmpcg/csr_matrix.hpp"

namespace mgmpcg {

/// Symmetric SOR on one level: a forward Gauss-Seidel sweep followed by a
/// backward sweep, both relaxed by omega. One step = one symmetric sweep.
class SsorSmoother {
 public:
  SsorSmoother(const CsrMatrix& a, double omega = 1.0, int nu = 1);

  const CsrMatrix& matrix() const noexcept { return *a_; }
  double omega() const noexcept { return omega_; }
  int nu() const noexcept { return nu_; }

  /// nu steps from a zero initial guess. This is the linear, symmetric
  /// operator sum_{i<nu} (I - M^{-1}A)^i M^{-1} applied to rhs.
  Vector apply(std::span<const double> rhs) const;

  /// `steps` symmetric sweeps on A x = rhs starting from the given x.
  void smooth(std::span<const double> rhs, std::span<double> x, int steps) const;

 private:
  const CsrMatrix* a_;
  Vector inv_diag_;
  double omega_;
  int nu_;
};

Vector ssor_apply(const SsorSmoother& s, std::span<const double> rhs);

/// nu symmetric sweeps from an arbitrary initial guess c0.
Vector ssor_smooth(const SsorSmoother& s, std::span<const double> rhs, std::span<const double> c0);

/// (u^T S v, v^T S u); equal for a symmetric smoother.
std::pair<double, double> smoother_as_operator_symmetry_check(const SsorSmoother& s,
                                                              std::span<const double> u,
                                                              std::span<const double> v);

/// Exact coarse solve by dense Cholesky.
class CoarseSolver {
 public:
  explicit CoarseSolver(const CsrMatrix& a);

  Index size() const noexcept { return n_; }
  Vector solve(std::span<const double> rhs) const;

 private:
  Index n_;
  std::vector<double> factor_;  // lower triangle, column-major
};

inline Vector coarse_solve(const CoarseSolver& c, std::span<const double> rhs) { return c.solve(rhs); }

}  // namespace mgmpcg
