#pragma once

#include <string>
#include <vector>

#include "mgmpcg/csr_matrix.hpp"
#include "mgmpcg/fem.hpp"

namespace mgmpcg {

/// One level of the hierarchy. Level 0 is the coarsest, level L the finest.
struct Level {
  Index index = 0;
  CsrMatrix a;            // A_l (Galerkin), symmetric
  CsrMatrix to_fine;      // P_l^L, n_L x n_l; identity on the finest level
  CsrMatrix from_fine;    // R_L^l = (P_l^L)^T
  CsrMatrix to_next;      // two-grid prolongation to level l+1; empty on the finest level
  CsrMatrix from_next;    // its transpose

  Index size() const { return a.nrows(); }
};

enum class HierarchyKind { geometric, aggregation };

struct LevelHierarchy {
  HierarchyKind kind = HierarchyKind::geometric;
  std::vector<Level> levels;
  /// Set when aggregation stopped before producing the requested level count.
  bool no_coarsening = false;

  Index num_levels() const { return levels.size(); }
  Index finest() const { return levels.size() - 1; }
  const Level& operator[](Index l) const { return levels[l]; }

  /// sum_l nnz(A_l) / nnz(A_L)
  double operator_complexity() const;
};

/// Assembles a hierarchy from the finest operator and the two-grid
/// prolongations ordered coarsest first (two_grid[l] maps level l to l+1).
/// Coarse operators come from chained Galerkin products; composite transfers
/// are stored explicitly.
LevelHierarchy hierarchy_from_prolongations(HierarchyKind kind, const CsrMatrix& a_fine,
                                            std::vector<CsrMatrix> two_grid);

/// Bilinear interpolation from `coarse` to the uniformly refined `fine` grid.
CsrMatrix bilinear_prolongation(const StructuredGrid& coarse, const StructuredGrid& fine);

/// Rows of `a` with no off-diagonal entries (eliminated Dirichlet DoFs).
std::vector<bool> decoupled_rows(const CsrMatrix& a);

/// Nested uniform grids. Transfers keep eliminated (decoupled) fine DoFs
/// separate from free ones: an eliminated fine node is only interpolated
/// from its coincident coarse node, and free fine nodes ignore eliminated
/// coarse nodes.
LevelHierarchy build_geometric_hierarchy(const StructuredGrid& fine, const CsrMatrix& a_fine,
                                         Index levels);

/// Symmetric strength graph: j is a strong neighbor of i when
/// |a_ij| >= tol * max_{k != i} |a_ik| and the same holds seen from j.
/// Requiring both directions keeps aggregates from straddling a
/// high-contrast interface.
std::vector<std::vector<Index>> strength_graph(const CsrMatrix& a, double strength_tol);

struct Aggregation {
  std::vector<Index> aggregate_of;  // node -> aggregate id
  Index count = 0;
};

/// Greedy three-pass aggregation over the strength graph. Nodes without
/// strong neighbors become singletons.
Aggregation aggregate(const CsrMatrix& a, double strength_tol);

/// Piecewise-constant prolongation: one unit entry per row.
CsrMatrix tentative_prolongation(const Aggregation& agg);

/// (I - omega D^{-1} A) P_tent
CsrMatrix smooth_prolongation(const CsrMatrix& a, const CsrMatrix& tentative, double omega = 2.0 / 3.0);

/// Smoothed aggregation. Stops early, setting no_coarsening, when a pass
/// shrinks the level by less than 10%.
LevelHierarchy build_aggregation_hierarchy(const CsrMatrix& a_fine, Index levels,
                                           double strength_tol = 0.25);

/// JSON text with per-level sizes, nnz and the operator complexity.
std::string hierarchy_summary(const LevelHierarchy& h);

}  // namespace mgmpcg
