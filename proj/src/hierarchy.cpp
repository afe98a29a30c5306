#include "mgmpcg/hierarchy.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>
#include <string>

namespace mgmpcg {

double LevelHierarchy::operator_complexity() const {
  double total = 0.0;
  for (const auto& lvl : levels) total += static_cast<double>(lvl.a.nnz());
  return total / static_cast<double>(levels.back().a.nnz());
}

LevelHierarchy hierarchy_from_prolongations(HierarchyKind kind, const CsrMatrix& a_fine,
                                            std::vector<CsrMatrix> two_grid) {
  require(a_fine.nrows() == a_fine.ncols(), ErrorCode::dimension_mismatch,
          "hierarchy: fine operator must be square");
  const Index nlev = two_grid.size() + 1;
  LevelHierarchy h;
  h.kind = kind;
  h.levels.resize(nlev);
  Level& top = h.levels.back();
  top.index = nlev - 1;
  top.a = a_fine.with_symmetric_flag(true);
  top.to_fine = CsrMatrix::identity(a_fine.nrows());
  top.from_fine = top.to_fine;
  for (Index l = nlev - 1; l-- > 0;) {
    Level& lvl = h.levels[l];
    const Level& finer = h.levels[l + 1];
    require(two_grid[l].nrows() == finer.size(), ErrorCode::dimension_mismatch,
            "hierarchy: prolongation rows do not match the finer level");
    lvl.index = l;
    lvl.to_next = std::move(two_grid[l]);
    lvl.from_next = transpose(lvl.to_next);
    lvl.a = galerkin_triple_product(lvl.from_next, finer.a, lvl.to_next);
    lvl.to_fine = multiply(finer.to_fine, lvl.to_next);
    lvl.from_fine = transpose(lvl.to_fine);
    require(lvl.size() < finer.size(), ErrorCode::invalid_argument,
            "hierarchy: level sizes must strictly increase towards the fine level");
  }
  return h;
}

CsrMatrix bilinear_prolongation(const StructuredGrid& coarse, const StructuredGrid& fine) {
  require(fine.nx == 2 * coarse.nx && fine.ny == 2 * coarse.ny, ErrorCode::invalid_argument,
          "bilinear_prolongation: fine grid must be the uniform refinement of the coarse grid");
  std::vector<Triplet> entries;
  entries.reserve(4 * fine.num_nodes());
  for (Index j = 0; j <= fine.ny; ++j) {
    for (Index i = 0; i <= fine.nx; ++i) {
      const Index row = fine.node(i, j);
      const Index ci = i / 2, cj = j / 2;
      const bool odd_i = i % 2 == 1, odd_j = j % 2 == 1;
      if (!odd_i && !odd_j) {
        entries.push_back({row, coarse.node(ci, cj), 1.0});
      } else if (odd_i && !odd_j) {
        entries.push_back({row, coarse.node(ci, cj), 0.5});
        entries.push_back({row, coarse.node(ci + 1, cj), 0.5});
      } else if (!odd_i && odd_j) {
        entries.push_back({row, coarse.node(ci, cj), 0.5});
        entries.push_back({row, coarse.node(ci, cj + 1), 0.5});
      } else {
        entries.push_back({row, coarse.node(ci, cj), 0.25});
        entries.push_back({row, coarse.node(ci + 1, cj), 0.25});
        entries.push_back({row, coarse.node(ci, cj + 1), 0.25});
        entries.push_back({row, coarse.node(ci + 1, cj + 1), 0.25});
      }
    }
  }
  return CsrMatrix::from_triplets(fine.num_nodes(), coarse.num_nodes(), std::move(entries));
}

std::vector<bool> decoupled_rows(const CsrMatrix& a) {
  std::vector<bool> out(a.nrows(), false);
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    bool coupled = false;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != i && vals[k] != 0.0) coupled = true;
    }
    out[i] = !coupled;
  }
  return out;
}

namespace {

/// Drops couplings between eliminated and free DoFs from a geometric
/// two-grid prolongation.
CsrMatrix mask_eliminated(const CsrMatrix& p, const StructuredGrid& coarse, const StructuredGrid& fine,
                          const std::vector<bool>& fine_fixed) {
  std::vector<bool> coarse_fixed(coarse.num_nodes());
  for (Index cj = 0; cj <= coarse.ny; ++cj) {
    for (Index ci = 0; ci <= coarse.nx; ++ci) {
      coarse_fixed[coarse.node(ci, cj)] = fine_fixed[fine.node(2 * ci, 2 * cj)];
    }
  }
  std::vector<Triplet> entries;
  entries.reserve(p.nnz());
  for (Index i = 0; i < p.nrows(); ++i) {
    auto cols = p.row_cols(i);
    auto vals = p.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (fine_fixed[i] == coarse_fixed[cols[k]]) entries.push_back({i, cols[k], vals[k]});
    }
  }
  return CsrMatrix::from_triplets(p.nrows(), p.ncols(), std::move(entries));
}

}  // namespace

LevelHierarchy build_geometric_hierarchy(const StructuredGrid& fine, const CsrMatrix& a_fine,
                                         Index levels) {
  require(levels >= 1, ErrorCode::invalid_argument, "geometric hierarchy: levels must be >= 1");
  require(a_fine.nrows() == fine.num_nodes(), ErrorCode::dimension_mismatch,
          "geometric hierarchy: operator size does not match the grid");
  const Index factor = Index{1} << (levels - 1);
  require(fine.nx % factor == 0 && fine.ny % factor == 0, ErrorCode::invalid_argument,
          "geometric hierarchy: grid " + std::to_string(fine.nx) + "x" + std::to_string(fine.ny) +
              " is not divisible by 2^(levels-1) = " + std::to_string(factor));

  std::vector<StructuredGrid> grids(levels);
  grids.back() = fine;
  for (Index l = levels - 1; l-- > 0;) grids[l] = StructuredGrid(grids[l + 1].nx / 2, grids[l + 1].ny / 2);

  // Eliminated DoFs sit on the boundary, so the coincident coarse nodes
  // inherit the flag level by level.
  std::vector<std::vector<bool>> fixed(levels);
  fixed.back() = decoupled_rows(a_fine);
  for (Index l = levels - 1; l-- > 0;) {
    fixed[l].resize(grids[l].num_nodes());
    for (Index cj = 0; cj <= grids[l].ny; ++cj) {
      for (Index ci = 0; ci <= grids[l].nx; ++ci) {
        fixed[l][grids[l].node(ci, cj)] = fixed[l + 1][grids[l + 1].node(2 * ci, 2 * cj)];
      }
    }
  }

  std::vector<CsrMatrix> two_grid;
  for (Index l = 0; l + 1 < levels; ++l) {
    two_grid.push_back(mask_eliminated(bilinear_prolongation(grids[l], grids[l + 1]), grids[l],
                                       grids[l + 1], fixed[l + 1]));
  }
  return hierarchy_from_prolongations(HierarchyKind::geometric, a_fine, std::move(two_grid));
}

std::vector<std::vector<Index>> strength_graph(const CsrMatrix& a, double strength_tol) {
  require(strength_tol > 0.0 && strength_tol < 1.0, ErrorCode::invalid_argument,
          "strength_graph: strength_tol must lie in (0,1)");
  const Index n = a.nrows();
  Vector row_max(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != i) row_max[i] = std::max(row_max[i], std::abs(vals[k]));
    }
  }
  std::vector<std::vector<Index>> graph(n);
  for (Index i = 0; i < n; ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Index j = cols[k];
      const double w = std::abs(vals[k]);
      if (j != i && w > 0.0 && w >= strength_tol * row_max[i] && w >= strength_tol * row_max[j]) {
        graph[i].push_back(j);
      }
    }
  }
  return graph;
}

Aggregation aggregate(const CsrMatrix& a, double strength_tol) {
  const auto graph = strength_graph(a, strength_tol);
  const Index n = a.nrows();
  constexpr Index kNone = std::numeric_limits<Index>::max();
  Aggregation agg{std::vector<Index>(n, kNone), 0};

  // Pass 1: root aggregates from nodes whose whole neighborhood is free;
  // isolated nodes are singletons.
  for (Index i = 0; i < n; ++i) {
    if (agg.aggregate_of[i] != kNone) continue;
    bool free = true;
    for (Index j : graph[i]) free = free && agg.aggregate_of[j] == kNone;
    if (!free) continue;
    agg.aggregate_of[i] = agg.count;
    for (Index j : graph[i]) agg.aggregate_of[j] = agg.count;
    ++agg.count;
  }

  // Pass 2: attach leftovers to the neighboring aggregate with the
  // strongest coupling, using the pass-1 assignment only.
  const auto after_pass1 = agg.aggregate_of;
  for (Index i = 0; i < n; ++i) {
    if (after_pass1[i] != kNone) continue;
    double best = -1.0;
    for (Index j : graph[i]) {
      if (after_pass1[j] == kNone) continue;
      const double w = std::abs(a.at(i, j));
      if (w > best) {
        best = w;
        agg.aggregate_of[i] = after_pass1[j];
      }
    }
  }

  // Pass 3: whatever remains groups with its unaggregated neighbors.
  for (Index i = 0; i < n; ++i) {
    if (agg.aggregate_of[i] != kNone) continue;
    agg.aggregate_of[i] = agg.count;
    for (Index j : graph[i]) {
      if (agg.aggregate_of[j] == kNone) agg.aggregate_of[j] = agg.count;
    }
    ++agg.count;
  }
  return agg;
}

CsrMatrix tentative_prolongation(const Aggregation& agg) {
  const Index n = agg.aggregate_of.size();
  std::vector<Index> offsets(n + 1);
  for (Index i = 0; i <= n; ++i) offsets[i] = i;
  return CsrMatrix(n, agg.count, std::move(offsets), agg.aggregate_of, std::vector<double>(n, 1.0));
}

CsrMatrix smooth_prolongation(const CsrMatrix& a, const CsrMatrix& tentative, double omega) {
  const Vector diag = a.diagonal();
  std::vector<Triplet> entries;
  entries.reserve(a.nnz());
  for (Index i = 0; i < a.nrows(); ++i) {
    require(diag[i] != 0.0, ErrorCode::invalid_argument, "smooth_prolongation: zero diagonal");
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      entries.push_back({i, cols[k], (cols[k] == i ? 1.0 : 0.0) - omega * vals[k] / diag[i]});
    }
  }
  const CsrMatrix smoother = CsrMatrix::from_triplets(a.nrows(), a.ncols(), std::move(entries));
  return multiply(smoother, tentative);
}

LevelHierarchy build_aggregation_hierarchy(const CsrMatrix& a_fine, Index levels, double strength_tol) {
  require(levels >= 1, ErrorCode::invalid_argument, "aggregation hierarchy: levels must be >= 1");
  require(a_fine.is_symmetric(1e-10), ErrorCode::invalid_argument,
          "aggregation hierarchy: operator must be symmetric");
  // Built fine to coarse, then reversed into coarsest-first order.
  std::vector<CsrMatrix> fine_first;
  CsrMatrix current = a_fine;
  bool stopped = false;
  for (Index l = 1; l < levels; ++l) {
    const Aggregation agg = aggregate(current, strength_tol);
    if (static_cast<double>(agg.count) > 0.9 * static_cast<double>(current.nrows())) {
      stopped = true;
      break;
    }
    CsrMatrix p = smooth_prolongation(current, tentative_prolongation(agg));
    current = galerkin_triple_product(transpose(p), current, p);
    fine_first.push_back(std::move(p));
  }
  std::vector<CsrMatrix> two_grid(fine_first.rbegin(), fine_first.rend());
  LevelHierarchy h =
      hierarchy_from_prolongations(HierarchyKind::aggregation, a_fine, std::move(two_grid));
  h.no_coarsening = stopped;
  return h;
}

std::string hierarchy_summary(const LevelHierarchy& h) {
  nlohmann::json j;
  j["kind"] = h.kind == HierarchyKind::geometric ? "geometric" : "aggregation";
  j["num_levels"] = h.num_levels();
  j["no_coarsening"] = h.no_coarsening;
  j["operator_complexity"] = h.operator_complexity();
  j["levels"] = nlohmann::json::array();
  for (const auto& lvl : h.levels) {
    j["levels"].push_back({{"level", lvl.index},
                           {"n", lvl.size()},
                           {"nnz", lvl.a.nnz()},
                           {"nnz_to_fine", lvl.to_fine.nnz()}});
  }
  return j.dump(2);
}

}  // namespace mgmpcg
