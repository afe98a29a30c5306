#include "mgmpcg/preconditioners.hpp"

#include <thread>

namespace mgmpcg {

namespace {

std::vector<SsorSmoother> make_smoothers(const LevelHierarchy& h, double omega, int nu) {
  std::vector<SsorSmoother> out;
  for (Index l = 1; l < h.num_levels(); ++l) out.emplace_back(h[l].a, omega, nu);
  return out;
}

const LevelHierarchy& checked(const std::shared_ptr<const LevelHierarchy>& h) {
  require(h != nullptr && h->num_levels() >= 1, ErrorCode::invalid_argument,
          "preconditioner: empty hierarchy");
  return *h;
}

}  // namespace

AdditiveMg::AdditiveMg(std::shared_ptr<const LevelHierarchy> hierarchy, int nu, double omega,
                       bool parallel_levels)
    : hierarchy_(std::move(hierarchy)),
      smoothers_(make_smoothers(checked(hierarchy_), omega, nu)),
      coarse_(hierarchy_->levels.front().a),
      parallel_(parallel_levels) {}

void AdditiveMg::level_correction(Index l, std::span<const double> r, std::span<double> out) const {
  const Level& lvl = (*hierarchy_)[l];
  if (l == hierarchy_->finest()) {
    const Vector c = l == 0 ? coarse_.solve(r) : smoothers_[l - 1].apply(r);
    std::copy(c.begin(), c.end(), out.begin());
    return;
  }
  const Vector restricted = spmv(lvl.from_fine, r);
  const Vector c = l == 0 ? coarse_.solve(restricted) : smoothers_[l - 1].apply(restricted);
  spmv(lvl.to_fine, c, out);
}

DirectionBlock AdditiveMg::block(std::span<const double> r) const {
  require(r.size() == fine_size(), ErrorCode::dimension_mismatch,
          "additive_block: residual length does not match the fine level");
  DirectionBlock z(fine_size(), num_columns());
  if (parallel_ && num_columns() > 1) {
    std::vector<std::jthread> workers;
    for (Index l = 0; l < num_columns(); ++l) {
      workers.emplace_back([this, l, r, &z] { level_correction(l, r, z.column(l)); });
    }
  } else {
    for (Index l = 0; l < num_columns(); ++l) level_correction(l, r, z.column(l));
  }
  return z;
}

Vector AdditiveMg::apply(std::span<const double> r) const { return block(r).column_sum(); }

DirectionBlock additive_block(const AdditiveMg& p, std::span<const double> r) { return p.block(r); }
Vector additive_apply(const AdditiveMg& p, std::span<const double> r) { return p.apply(r); }

VCycle::VCycle(std::shared_ptr<const LevelHierarchy> hierarchy, int nu_pre, int nu_post, double omega)
    : hierarchy_(std::move(hierarchy)),
      smoothers_(make_smoothers(checked(hierarchy_), omega, 1)),
      coarse_(hierarchy_->levels.front().a),
      nu_pre_(nu_pre),
      nu_post_(nu_post) {
  require(nu_pre >= 0 && nu_post >= 0, ErrorCode::invalid_argument,
          "VCycle: smoothing step counts must be non-negative");
}

Vector VCycle::cycle(Index l, std::span<const double> rhs) const {
  if (l == 0) return coarse_.solve(rhs);
  const Level& lvl = (*hierarchy_)[l];
  const Level& coarser = (*hierarchy_)[l - 1];
  const SsorSmoother& s = smoothers_[l - 1];
  Vector x(rhs.size(), 0.0);
  s.smooth(rhs, x, nu_pre_);
  Vector res = spmv(lvl.a, x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] = rhs[i] - res[i];
  const Vector correction = cycle(l - 1, spmv(coarser.from_next, res));
  axpy(1.0, spmv(coarser.to_next, correction), x);
  s.smooth(rhs, x, nu_post_);
  return x;
}

Vector VCycle::apply(std::span<const double> r) const {
  require(r.size() == hierarchy_->levels.back().size(), ErrorCode::dimension_mismatch,
          "vcycle_apply: residual length does not match the fine level");
  return cycle(hierarchy_->finest(), r);
}

Vector vcycle_apply(const VCycle& p, std::span<const double> r) { return p.apply(r); }

}  // namespace mgmpcg
