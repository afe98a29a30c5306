#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mgmpcg/dense.hpp"
#include "mgmpcg/hierarchy.hpp"
#include "mgmpcg/smoothers.hpp"

namespace mgmpcg {

/// A linear action r -> z (a preconditioner).
using LinearAction = std::function<Vector(std::span<const double>)>;
/// A linear action r -> [z_0 | ... | z_k] producing several directions.
using BlockAction = std::function<DirectionBlock(std::span<const double>)>;

/// Additive multigrid over a hierarchy: every level smooths the restricted
/// fine residual independently (nu SSOR steps from zero, exact solve on the
/// coarsest level) and prolongs back with the composite transfer.
class AdditiveMg {
 public:
  AdditiveMg(std::shared_ptr<const LevelHierarchy> hierarchy, int nu = 6, double omega = 1.0,
             bool parallel_levels = false);

  const LevelHierarchy& hierarchy() const noexcept { return *hierarchy_; }
  Index num_columns() const noexcept { return hierarchy_->num_levels(); }
  Index fine_size() const noexcept { return hierarchy_->levels.back().size(); }

  /// Column l = P_l^L S_l (R_L^l r), coarsest level first.
  DirectionBlock block(std::span<const double> r) const;
  /// Equally weighted sum of the level corrections.
  Vector apply(std::span<const double> r) const;

 private:
  void level_correction(Index l, std::span<const double> r, std::span<double> out) const;

  std::shared_ptr<const LevelHierarchy> hierarchy_;
  std::vector<SsorSmoother> smoothers_;  // index l-1 for level l >= 1
  CoarseSolver coarse_;
  bool parallel_;
};

DirectionBlock additive_block(const AdditiveMg& p, std::span<const double> r);
Vector additive_apply(const AdditiveMg& p, std::span<const double> r);

/// Multiplicative V(nu_pre, nu_post) cycle with zero initial guess, SSOR
/// smoothing and an exact coarsest solve, using two-grid transfers between
/// consecutive levels.
class VCycle {
 public:
  VCycle(std::shared_ptr<const LevelHierarchy> hierarchy, int nu_pre = 3, int nu_post = 3,
         double omega = 1.0);

  const LevelHierarchy& hierarchy() const noexcept { return *hierarchy_; }
  Vector apply(std::span<const double> r) const;

 private:
  Vector cycle(Index l, std::span<const double> rhs) const;

  std::shared_ptr<const LevelHierarchy> hierarchy_;
  std::vector<SsorSmoother> smoothers_;
  CoarseSolver coarse_;
  int nu_pre_;
  int nu_post_;
};

Vector vcycle_apply(const VCycle& p, std::span<const double> r);

}  // namespace mgmpcg
