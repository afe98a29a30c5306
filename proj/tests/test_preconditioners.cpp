#include <doctest.h>

#include <random>

#include "mgmpcg/fem.hpp"
#include "mgmpcg/preconditioners.hpp"
#include "oracles.hpp"

using namespace mgmpcg;

namespace {

// Dense relaxed symmetric Gauss-Seidel, `steps` sweeps starting from x.
oracle::Vec dense_ssor(const oracle::Dense& a, const oracle::Vec& b, oracle::Vec x, double omega, int steps) {
  const std::size_t n = b.size();
  auto relax = [&](std::size_t i) {
    double s = b[i];
    for (std::size_t j = 0; j < n; ++j) s -= a[i][j] * x[j];
    x[i] += omega * s / a[i][i];
  };
  for (int k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < n; ++i) relax(i);
    for (std::size_t i = n; i-- > 0;) relax(i);
  }
  return x;
}

std::shared_ptr<const LevelHierarchy> poisson_hierarchy(Index n, Index levels, double kxx = 1.0) {
  const StructuredGrid g(n, n);
  const auto sys = assemble(g, DiffusionField::uniform(g, kxx, 1.0), BoundarySpec::all_dirichlet(0.0), 1.0);
  return std::make_shared<const LevelHierarchy>(build_geometric_hierarchy(g, sys.matrix, levels));
}

oracle::Vec column(const DirectionBlock& b, Index j) {
  const auto c = b.column(j);
  return oracle::Vec(c.begin(), c.end());
}

}  // namespace

TEST_CASE("AdditiveMg") {
  SUBCASE("single level solves exactly") {
    const auto h = poisson_hierarchy(4, 1);
    const AdditiveMg p(h);
    std::mt19937 rng(1);
    const auto r = oracle::random_vec(h->levels[0].size(), rng);
    const auto blk = p.block(r);
    REQUIRE(blk.ncols() == 1);
    CHECK(oracle::max_abs_diff(column(blk, 0), oracle::lu_solve(oracle::to_dense(h->levels[0].a), r)) <= 1e-12);
  }
  SUBCASE("zero residual gives zero columns") {
    const auto h = poisson_hierarchy(8, 3);
    const AdditiveMg p(h);
    const auto blk = p.block(Vector(h->levels.back().size(), 0.0));
    CHECK(blk.ncols() == 3);
    for (Index j = 0; j < blk.ncols(); ++j) CHECK(max_abs(column(blk, j)) == 0.0);
  }
  SUBCASE("two-level columns against dense oracle") {
    const auto h = poisson_hierarchy(4, 2, 0.1);
    const double omega = 1.3;
    const int nu = 2;
    const AdditiveMg p(h, nu, omega);
    std::mt19937 rng(2);
    const auto r = oracle::random_vec(25, rng);
    const auto blk = p.block(r);
    REQUIRE(blk.ncols() == 2);
    const auto pd = oracle::to_dense((*h)[0].to_fine);
    const auto a0 = oracle::to_dense((*h)[0].a);
    const auto coarse = oracle::matvec(pd, oracle::lu_solve(a0, oracle::matvec(oracle::transpose(pd), r)));
    const auto fine = dense_ssor(oracle::to_dense((*h)[1].a), r, oracle::Vec(25, 0.0), omega, nu);
    CHECK(oracle::max_abs_diff(column(blk, 0), coarse) <= 1e-12);
    CHECK(oracle::max_abs_diff(column(blk, 1), fine) <= 1e-12);
  }
  SUBCASE("apply is the column sum and is symmetric") {
    const auto h = poisson_hierarchy(16, 3, 1e-3);
    const AdditiveMg p(h, 6, 1.0);
    const AdditiveMg pp(h, 6, 1.0, true);
    std::mt19937 rng(3);
    const auto u = oracle::random_vec(h->levels.back().size(), rng);
    const auto v = oracle::random_vec(h->levels.back().size(), rng);
    const auto sum = p.block(u).column_sum();
    CHECK(oracle::max_abs_diff(p.apply(u), sum) <= 1e-12);
    CHECK(oracle::max_abs_diff(pp.apply(u), sum) <= 1e-12);
    const double uv = dot(u, p.apply(v)), vu = dot(v, p.apply(u));
    CHECK(std::abs(uv - vu) <= 1e-10 * std::abs(uv));
  }
  SUBCASE("column l lies in the range of P_l") {
    const auto h = poisson_hierarchy(8, 3);
    const AdditiveMg p(h);
    std::mt19937 rng(4);
    const auto blk = p.block(oracle::random_vec(81, rng));
    for (Index l = 0; l < 3; ++l) {
      // least squares fit by the normal equations of P_l
      const auto pd = oracle::to_dense((*h)[l].to_fine);
      const auto pt = oracle::transpose(pd);
      const auto c = column(blk, l);
      const auto coef = oracle::lu_solve(oracle::matmul(pt, pd), oracle::matvec(pt, c));
      CHECK(oracle::max_abs_diff(oracle::matvec(pd, coef), c) <= 1e-10);
    }
  }
  SUBCASE("residual length mismatch") {
    const auto h = poisson_hierarchy(4, 2);
    const AdditiveMg p(h);
    CHECK_THROWS_AS(p.block(Vector(3, 1.0)), Error);
  }
}

TEST_CASE("VCycle") {
  SUBCASE("two-grid cycle against dense oracle") {
    const auto h = poisson_hierarchy(4, 2, 0.3);
    const VCycle v(h, 2, 1, 1.1);
    std::mt19937 rng(5);
    const auto r = oracle::random_vec(25, rng);
    const auto a = oracle::to_dense((*h)[1].a);
    const auto pd = oracle::to_dense((*h)[0].to_next);
    auto x = dense_ssor(a, r, oracle::Vec(25, 0.0), 1.1, 2);
    auto res = oracle::matvec(a, x);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = r[i] - res[i];
    const auto corr =
        oracle::matvec(pd, oracle::lu_solve(oracle::to_dense((*h)[0].a), oracle::matvec(oracle::transpose(pd), res)));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];
    x = dense_ssor(a, r, x, 1.1, 1);
    CHECK(oracle::max_abs_diff(vcycle_apply(v, r), x) <= 1e-12);
  }
  SUBCASE("stationary iteration contracts") {
    const auto h = poisson_hierarchy(32, 4);
    const VCycle v(h);
    const auto& a = h->levels.back().a;
    std::mt19937 rng(6);
    const auto b = oracle::random_vec(a.nrows(), rng);
    Vector x(b.size(), 0.0);
    double prev = norm2(b);
    for (int k = 0; k < 8; ++k) {
      Vector r = spmv(a, x);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
      const double rn = norm2(r);
      if (k > 0) CHECK(rn < 0.5 * prev);
      prev = rn;
      axpy(1.0, v.apply(r), x);
    }
  }
  SUBCASE("symmetric for equal pre and post sweeps") {
    const auto h = poisson_hierarchy(16, 3, 1e-2);
    const VCycle v(h, 3, 3);
    std::mt19937 rng(7);
    const auto u = oracle::random_vec(289, rng), w = oracle::random_vec(289, rng);
    const double a = dot(u, v.apply(w)), b = dot(w, v.apply(u));
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
}
