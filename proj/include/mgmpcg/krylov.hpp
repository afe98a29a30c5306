#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "mgmpcg/csr_matrix.hpp"
#include "mgmpcg/dense.hpp"
#include "mgmpcg/preconditioners.hpp"

namespace mgmpcg {

struct SolverConfig {
  double tol_rel = 1e-8;       // on ||r_k||_2 / ||b||_2
  std::size_t max_iters = 2000;
  std::size_t m = 5;           // MPCG history length
  double gram_drop_tol = 1e-12;

  void validate() const;
};

struct SolveReport {
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> residual_history;         // ||r_k||_2, iterations + 1 entries
  std::vector<std::vector<double>> alpha_history;  // MPCG only, one row per iteration
  std::size_t rank_deficiency_events = 0;
  double wall_time = 0.0;  // seconds
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// One stored search block with its A-image and the factorized Gram matrix.
struct HistoryEntry {
  DirectionBlock p;
  DirectionBlock ap;
  GramFactor gram;
  double gram_scale = 0.0;  // max |P^T A P|
};

/// The last m search blocks, oldest first.
class MpcgHistory {
 public:
  explicit MpcgHistory(std::size_t capacity);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const HistoryEntry& operator[](std::size_t i) const { return entries_[i]; }

  void push(HistoryEntry entry);

  /// Z - sum_j P_j (P_j^T A P_j)^+ (A P_j)^T Z over the stored blocks.
  DirectionBlock conjugate(const DirectionBlock& z) const;

 private:
  std::size_t capacity_;
  std::deque<HistoryEntry> entries_;
};

/// max_j max|P_j^T A P_new| normalized by sqrt(max|P_j^T A P_j| * max|P_new^T A P_new|).
double conjugacy_audit(const MpcgHistory& history, const DirectionBlock& p_new, const CsrMatrix& a);

/// Raised through Error with code indefinite_operator when p^T A p <= 0 or a
/// Gram matrix has an eigenvalue below -kIndefiniteTol * lambda_max.
inline constexpr double kIndefiniteTol = 1e-8;

/// Preconditioned conjugate gradients.
SolveResult pcg(const CsrMatrix& a, std::span<const double> b, const LinearAction& precond,
                const SolverConfig& cfg, std::span<const double> x0);

/// State handed to an MPCG observer after the next block P_{k+1} has been
/// conjugated against the history (before the history learns about it).
struct MpcgStep {
  std::size_t iteration;  // k+1
  const Vector& x;
  const Vector& r;
  const DirectionBlock& p_prev;  // P_k
  const std::vector<double>& alpha;
  const MpcgHistory& history;
  const DirectionBlock& p_next;  // P_{k+1}
};
using MpcgObserver = std::function<void(const MpcgStep&)>;

/// Multipreconditioned CG with a truncated history of m blocks. Each
/// iteration takes the energy-minimizing combination of the current block.
SolveResult mpcg(const CsrMatrix& a, std::span<const double> b, const BlockAction& directions,
                 const SolverConfig& cfg, std::span<const double> x0,
                 const MpcgObserver& observer = {});
SolveResult mpcg(const CsrMatrix& a, std::span<const double> b, const AdditiveMg& addmg,
                 const SolverConfig& cfg, std::span<const double> x0,
                 const MpcgObserver& observer = {});

}  // namespace mgmpcg
