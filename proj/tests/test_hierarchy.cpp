#include <doctest.h>

#include <json.hpp>
#include <random>

#include "mgmpcg/fem.hpp"
#include "mgmpcg/fractures.hpp"
#include "mgmpcg/hierarchy.hpp"
#include "oracles.hpp"

using namespace mgmpcg;

namespace {

LinearSystem poisson(Index n, double kxx = 1.0) {
  const StructuredGrid g(n, n);
  return assemble(g, DiffusionField::uniform(g, kxx, 1.0), BoundarySpec::all_dirichlet(0.0), 1.0);
}

// Bilinear hat function of coarse node (I, J) evaluated at (x, y).
double hat(const StructuredGrid& c, Index i, Index j, double x, double y) {
  const double wx = 1.0 - std::abs(x - i * c.hx()) / c.hx();
  const double wy = 1.0 - std::abs(y - j * c.hy()) / c.hy();
  return std::max(wx, 0.0) * std::max(wy, 0.0);
}

void check_spd(const CsrMatrix& a) {
  CHECK(a.is_symmetric(1e-12));
  const auto ev = oracle::jacobi_eigenvalues(oracle::to_dense(a));
  CHECK(ev.front() > 0.0);
}

}  // namespace

TEST_CASE("bilinear_prolongation") {
  const StructuredGrid coarse(2, 2), fine(4, 4);
  const auto p = bilinear_prolongation(coarse, fine);
  REQUIRE(p.nrows() == 25);
  REQUIRE(p.ncols() == 9);
  SUBCASE("matches coarse shape functions at fine nodes") {
    for (Index j = 0; j <= fine.ny; ++j)
      for (Index i = 0; i <= fine.nx; ++i)
        for (Index cj = 0; cj <= coarse.ny; ++cj)
          for (Index ci = 0; ci <= coarse.nx; ++ci)
            CHECK(p.at(fine.node(i, j), coarse.node(ci, cj)) ==
                  doctest::Approx(hat(coarse, ci, cj, i * fine.hx(), j * fine.hy())));
  }
  SUBCASE("partition of unity and linear reproduction") {
    const auto ones = spmv(p, Vector(9, 1.0));
    for (double v : ones) CHECK(v == doctest::Approx(1.0));
    Vector xc(9);
    for (Index j = 0; j <= 2; ++j)
      for (Index i = 0; i <= 2; ++i) xc[coarse.node(i, j)] = i * coarse.hx() + 2.0 * j * coarse.hy();
    const auto xf = spmv(p, xc);
    for (Index j = 0; j <= 4; ++j)
      for (Index i = 0; i <= 4; ++i) CHECK(xf[fine.node(i, j)] == doctest::Approx(i * fine.hx() + 2.0 * j * fine.hy()));
  }
  SUBCASE("non-nested grids") {
    CHECK_THROWS_AS(bilinear_prolongation(StructuredGrid(3, 3), StructuredGrid(4, 4)), Error);
  }
}

TEST_CASE("geometric hierarchy") {
  SUBCASE("single level has identity transfers") {
    const auto sys = poisson(8);
    const auto h = build_geometric_hierarchy(StructuredGrid(8, 8), sys.matrix, 1);
    REQUIRE(h.num_levels() == 1);
    CHECK(max_abs_difference(h[0].to_fine, CsrMatrix::identity(81)) == 0.0);
    CHECK(max_abs_difference(h[0].a, sys.matrix) == 0.0);
  }
  SUBCASE("160 with 4 levels coarsens to 20x20") {
    const StructuredGrid g(160, 160);
    const auto sys = assemble(g, DiffusionField::uniform(g, 1, 1), BoundarySpec::all_dirichlet(0.0), 1.0);
    const auto h = build_geometric_hierarchy(g, sys.matrix, 4);
    REQUIRE(h.num_levels() == 4);
    CHECK(h[0].size() == 21 * 21);
    CHECK(h[1].size() == 41 * 41);
    CHECK(h[2].size() == 81 * 81);
    CHECK(h[3].size() == 161 * 161);
  }
  SUBCASE("two-level coarse operator is the Galerkin product") {
    const auto sys = poisson(8, 0.01);
    const auto h = build_geometric_hierarchy(StructuredGrid(8, 8), sys.matrix, 2);
    const auto p = oracle::to_dense(h[0].to_fine);
    const auto rap = oracle::matmul(oracle::transpose(p), oracle::matmul(oracle::to_dense(sys.matrix), p));
    CHECK(oracle::max_abs_diff(oracle::to_dense(h[0].a), rap) <= 1e-12);
    check_spd(h[0].a);
  }
  SUBCASE("indivisible sizes") {
    const auto sys = poisson(10);
    CHECK_THROWS_AS(build_geometric_hierarchy(StructuredGrid(10, 10), sys.matrix, 3), Error);
    CHECK_THROWS_AS(build_geometric_hierarchy(StructuredGrid(10, 10), sys.matrix, 0), Error);
  }
  SUBCASE("structural invariants") {
    const auto sys = poisson(16, 1e-4);
    const auto h = build_geometric_hierarchy(StructuredGrid(16, 16), sys.matrix, 3);
    std::mt19937 rng(3);
    for (Index l = 0; l < h.num_levels(); ++l) {
      CHECK(max_abs_difference(h[l].from_fine, transpose(h[l].to_fine)) == 0.0);
      check_spd(h[l].a);
      // energy identity: (P v)^T A (P v) = v^T A_l v
      const auto v = oracle::random_vec(h[l].size(), rng);
      const auto pv = spmv(h[l].to_fine, v);
      const double fine_energy = dot(pv, spmv(sys.matrix, pv));
      const double coarse_energy = dot(v, spmv(h[l].a, v));
      CHECK(std::abs(fine_energy - coarse_energy) <= 1e-10 * std::max(1.0, std::abs(fine_energy)));
      if (l + 1 < h.num_levels()) {
        const auto chained = multiply(h[l + 1].to_fine, h[l].to_next);
        CHECK(max_abs_difference(chained, h[l].to_fine) <= 1e-14);
      }
    }
  }
}

TEST_CASE("aggregation") {
  SUBCASE("path graph") {
    const auto a = oracle::from_dense(oracle::path_laplacian(9), true);
    const auto agg = aggregate(a, 0.25);
    CHECK(agg.count == 3);
    const std::vector<Index> expect{0, 0, 1, 1, 1, 2, 2, 2, 2};
    CHECK(agg.aggregate_of == expect);
    const auto t = tentative_prolongation(agg);
    for (Index i = 0; i < t.nrows(); ++i) {
      CHECK(t.row_cols(i).size() == 1);
      CHECK(t.row_values(i)[0] == 1.0);
    }
    const auto ones = spmv(t, Vector(3, 1.0));
    for (double v : ones) CHECK(v == 1.0);
  }
  SUBCASE("diagonal operator cannot be coarsened") {
    const auto a = CsrMatrix::from_triplets(5, 5, {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}, {3, 3, 4}, {4, 4, 5}}, true);
    const auto h = build_aggregation_hierarchy(a, 3);
    CHECK(h.no_coarsening);
    CHECK(h.num_levels() == 1);
  }
  SUBCASE("every node belongs to exactly one aggregate") {
    const auto sys = poisson(12, 1e-3);
    const auto agg = aggregate(sys.matrix, 0.25);
    REQUIRE(agg.aggregate_of.size() == sys.matrix.nrows());
    std::vector<int> seen(agg.count, 0);
    for (Index id : agg.aggregate_of) {
      REQUIRE(id < agg.count);
      ++seen[id];
    }
    for (int c : seen) CHECK(c >= 1);
  }
  SUBCASE("strength graph is symmetric") {
    const StructuredGrid g(10, 10);
    const FractureNetwork net{{{0.1, 0.5, 0.9, 0.5}, {0.5, 0.1, 0.5, 0.9}}, 0.15, 1e4, 1.0};
    const auto a = assemble_stiffness(g, rasterize_fractures(g, net));
    const auto s = strength_graph(a, 0.25);
    for (Index i = 0; i < s.size(); ++i)
      for (Index j : s[i]) {
        CHECK(j != i);
        CHECK(std::find(s[j].begin(), s[j].end(), i) != s[j].end());
      }
  }
  SUBCASE("smoothed hierarchy invariants") {
    const StructuredGrid g(24, 24);
    const FractureNetwork net{{{0.1, 0.3, 0.9, 0.6}}, 0.08, 1e-4, 1.0};
    BoundarySpec bc;
    bc[Side::left] = BoundaryCondition::neumann(1.0);
    bc[Side::right] = BoundaryCondition::dirichlet(1.0);
    bc[Side::bottom] = BoundaryCondition::neumann(0.0);
    bc[Side::top] = BoundaryCondition::neumann(0.0);
    const auto sys = assemble(g, rasterize_fractures(g, net), bc, 0.0);
    const auto h = build_aggregation_hierarchy(sys.matrix, 3);
    REQUIRE(h.num_levels() == 3);
    for (Index l = 0; l + 1 < h.num_levels(); ++l) {
      CHECK(h[l].size() < h[l + 1].size());
      CHECK(max_abs_difference(h[l].from_next, transpose(h[l].to_next)) == 0.0);
      const auto p = oracle::to_dense(h[l].to_next);
      const auto rap =
          oracle::matmul(oracle::transpose(p), oracle::matmul(oracle::to_dense(h[l + 1].a), p));
      CHECK(oracle::max_abs_diff(oracle::to_dense(h[l].a), rap) <= 1e-10);
      check_spd(h[l].a);
    }
    CHECK(h.operator_complexity() >= 1.0);
    const auto j = nlohmann::json::parse(hierarchy_summary(h));
    CHECK(j["kind"] == "aggregation");
    CHECK(j["num_levels"] == 3);
    CHECK(j["levels"].size() == 3);
    CHECK(j["levels"][2]["n"] == sys.matrix.nrows());
  }
}
