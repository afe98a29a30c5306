#include "mgmpcg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace mgmpcg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Vector initial_residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x0) {
  require(a.nrows() == a.ncols(), ErrorCode::dimension_mismatch, "solver: matrix must be square");
  require(b.size() == a.nrows() && x0.size() == a.nrows(), ErrorCode::dimension_mismatch,
          "solver: b and x0 must match the matrix size");
  Vector r = spmv(a, x0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

double target_residual(const SolverConfig& cfg, std::span<const double> b, double r0_norm) {
  const double bnorm = norm2(b);
  return cfg.tol_rel * (bnorm > 0.0 ? bnorm : r0_norm);
}

}  // namespace

void SolverConfig::validate() const {
  require(tol_rel > 0.0, ErrorCode::config, "solver config: tol_rel must be > 0");
  require(m >= 1, ErrorCode::config, "solver config: history length m must be >= 1");
  require(gram_drop_tol >= 0.0, ErrorCode::config, "solver config: gram_drop_tol must be >= 0");
}

MpcgHistory::MpcgHistory(std::size_t capacity) : capacity_(capacity) {
  require(capacity >= 1, ErrorCode::invalid_argument, "MpcgHistory: capacity must be >= 1");
}

void MpcgHistory::push(HistoryEntry entry) {
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(std::move(entry));
}

DirectionBlock MpcgHistory::conjugate(const DirectionBlock& z) const {
  // All coefficient blocks beta_j = G_j^+ (A P_j)^T Z use the unmodified Z.
  std::vector<std::vector<Vector>> betas;
  betas.reserve(entries_.size());
  for (const auto& e : entries_) {
    std::vector<Vector> cols;
    for (std::size_t c = 0; c < z.ncols(); ++c) cols.push_back(e.gram.solve(e.ap.transpose_times(z.column(c))));
    betas.push_back(std::move(cols));
  }
  DirectionBlock p = z;
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    for (std::size_t c = 0; c < z.ncols(); ++c) {
      const Vector update = entries_[j].p.combine(betas[j][c]);
      axpy(-1.0, update, p.column(c));
    }
  }
  return p;
}

double conjugacy_audit(const MpcgHistory& history, const DirectionBlock& p_new, const CsrMatrix& a) {
  require(!history.empty(), ErrorCode::invalid_argument, "conjugacy_audit: empty history");
  const DirectionBlock ap_new = apply(a, p_new);
  const double new_scale = block_gram(p_new, ap_new).max_abs();
  double worst = 0.0;
  for (std::size_t j = 0; j < history.size(); ++j) {
    const auto& e = history[j];
    const double denom = std::sqrt(e.gram_scale * new_scale);
    if (denom == 0.0) continue;
    worst = std::max(worst, max_abs(cross_gram(e.p, ap_new)) / denom);
  }
  return worst;
}

SolveResult pcg(const CsrMatrix& a, std::span<const double> b, const LinearAction& precond,
                const SolverConfig& cfg, std::span<const double> x0) {
  cfg.validate();
  const auto start = Clock::now();
  SolveResult out{Vector(x0.begin(), x0.end()), {}};
  SolveReport& rep = out.report;
  Vector r = initial_residual(a, b, x0);
  rep.residual_history.push_back(norm2(r));
  const double target = target_residual(cfg, b, rep.residual_history.front());
  if (rep.residual_history.back() <= target) {
    rep.converged = true;
    rep.wall_time = seconds_since(start);
    return out;
  }

  Vector z = precond(r);
  Vector p = z;
  double rz = dot(r, z);
  Vector ap(a.nrows());
  while (rep.iterations < cfg.max_iters) {
    spmv(a, p, ap);
    const double pap = dot(p, ap);
    require(pap > 0.0, ErrorCode::indefinite_operator,
            "pcg: p^T A p = " + std::to_string(pap) + " at iteration " +
                std::to_string(rep.iterations));
    const double alpha = rz / pap;
    axpy(alpha, p, out.x);
    axpy(-alpha, ap, r);
    ++rep.iterations;
    rep.residual_history.push_back(norm2(r));
    if (rep.residual_history.back() <= target) {
      rep.converged = true;
      break;
    }
    z = precond(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  rep.wall_time = seconds_since(start);
  return out;
}

SolveResult mpcg(const CsrMatrix& a, std::span<const double> b, const BlockAction& directions,
                 const SolverConfig& cfg, std::span<const double> x0, const MpcgObserver& observer) {
  cfg.validate();
  const auto start = Clock::now();
  SolveResult out{Vector(x0.begin(), x0.end()), {}};
  SolveReport& rep = out.report;
  Vector r = initial_residual(a, b, x0);
  rep.residual_history.push_back(norm2(r));
  const double target = target_residual(cfg, b, rep.residual_history.front());
  if (rep.residual_history.back() <= target) {
    rep.converged = true;
    rep.wall_time = seconds_since(start);
    return out;
  }

  MpcgHistory history(cfg.m);
  DirectionBlock p = directions(r);
  require(p.nrows() == a.nrows(), ErrorCode::dimension_mismatch,
          "mpcg: direction block rows do not match the matrix");
  while (rep.iterations < cfg.max_iters) {
    DirectionBlock ap = apply(a, p);
    const DenseSpd gram = block_gram(p, ap);
    GramFactor factor(gram, cfg.gram_drop_tol);
    require(factor.lambda_min() >= -kIndefiniteTol * std::abs(factor.lambda_max()) &&
                factor.lambda_max() >= 0.0,
            ErrorCode::indefinite_operator,
            "mpcg: Gram matrix has eigenvalue " + std::to_string(factor.lambda_min()) +
                " at iteration " + std::to_string(rep.iterations));
    if (factor.rank() == 0) {
      // a zero Gram matrix from nonzero directions means p^T A p = 0 for p != 0
      require(p.max_abs() == 0.0, ErrorCode::indefinite_operator,
              "mpcg: nonzero direction with zero energy at iteration " + std::to_string(rep.iterations));
      break;  // every direction vanished; no progress possible
    }
    if (factor.rank_deficient()) ++rep.rank_deficiency_events;

    const Vector alpha = factor.solve(p.transpose_times(r));
    axpy(1.0, p.combine(alpha), out.x);
    axpy(-1.0, ap.combine(alpha), r);
    ++rep.iterations;
    rep.alpha_history.push_back(alpha);
    rep.residual_history.push_back(norm2(r));
    if (rep.residual_history.back() <= target) {
      rep.converged = true;
      break;
    }

    const double scale = gram.max_abs();
    history.push({std::move(p), std::move(ap), std::move(factor), scale});
    // Projecting twice keeps the block conjugate once the stored directions
    // nearly span the error; a single pass stalls around 1e-9 there.
    DirectionBlock next = history.conjugate(history.conjugate(directions(r)));
    if (observer) {
      observer(MpcgStep{rep.iterations, out.x, r, history[history.size() - 1].p, alpha, history, next});
    }
    p = std::move(next);
  }
  rep.wall_time = seconds_since(start);
  return out;
}

SolveResult mpcg(const CsrMatrix& a, std::span<const double> b, const AdditiveMg& addmg,
                 const SolverConfig& cfg, std::span<const double> x0, const MpcgObserver& observer) {
  require(addmg.fine_size() == a.nrows(), ErrorCode::dimension_mismatch,
          "mpcg: hierarchy is not dimensioned to the system matrix");
  return mpcg(
      a, b, [&addmg](std::span<const double> r) { return addmg.block(r); }, cfg, x0, observer);
}

}  // namespace mgmpcg
