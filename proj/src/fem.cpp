#include "mgmpcg/fem.hpp"

#include <cmath>
#include <string>

namespace mgmpcg {

StructuredGrid::StructuredGrid(Index nx_, Index ny_) : nx(nx_), ny(ny_) {
  require(nx >= 1 && ny >= 1, ErrorCode::invalid_argument, "StructuredGrid: nx, ny must be >= 1");
}

std::array<Index, 4> StructuredGrid::element_nodes(Index i, Index j) const {
  return {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
}

DiffusionField DiffusionField::uniform(const StructuredGrid& grid, double kxx, double kyy) {
  DiffusionField f{std::vector<double>(grid.num_elements(), kxx),
                   std::vector<double>(grid.num_elements(), kyy)};
  f.validate(grid);
  return f;
}

void DiffusionField::validate(const StructuredGrid& grid) const {
  require(kxx.size() == grid.num_elements() && kyy.size() == grid.num_elements(),
          ErrorCode::dimension_mismatch, "DiffusionField: size does not match grid");
  for (std::size_t e = 0; e < kxx.size(); ++e) {
    require(kxx[e] > 0.0 && kyy[e] > 0.0, ErrorCode::invalid_argument,
            "DiffusionField: non-positive coefficient in element " + std::to_string(e));
  }
}

BoundarySpec BoundarySpec::all_dirichlet(double u) {
  BoundarySpec bc;
  bc.sides.fill(BoundaryCondition::dirichlet(u));
  return bc;
}

bool BoundarySpec::has_dirichlet() const {
  for (const auto& s : sides) {
    if (s.kind == BoundaryCondition::Kind::dirichlet) return true;
  }
  return false;
}

ElementMatrix element_stiffness(double kxx, double kyy, double hx, double hy) {
  require(kxx > 0.0 && kyy > 0.0 && hx > 0.0 && hy > 0.0, ErrorCode::invalid_argument,
          "element_stiffness: all inputs must be positive");
  constexpr std::array<double, 4> xi_a{-1.0, 1.0, 1.0, -1.0};
  constexpr std::array<double, 4> eta_a{-1.0, -1.0, 1.0, 1.0};
  const double g = 1.0 / std::sqrt(3.0);
  const double jac = 0.25 * hx * hy;
  ElementMatrix ke{};
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      std::array<double, 4> dx{}, dy{};
      for (int a = 0; a < 4; ++a) {
        dx[a] = 0.25 * xi_a[a] * (1.0 + eta_a[a] * eta) * (2.0 / hx);
        dy[a] = 0.25 * eta_a[a] * (1.0 + xi_a[a] * xi) * (2.0 / hy);
      }
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) ke[a][b] += jac * (kxx * dx[a] * dx[b] + kyy * dy[a] * dy[b]);
      }
    }
  }
  return ke;
}

CsrMatrix assemble_stiffness(const StructuredGrid& grid, const DiffusionField& field) {
  field.validate(grid);
  std::vector<Triplet> entries;
  entries.reserve(16 * grid.num_elements());
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      const Index e = grid.element(i, j);
      const auto ke = element_stiffness(field.kxx[e], field.kyy[e], grid.hx(), grid.hy());
      const auto nodes = grid.element_nodes(i, j);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) entries.push_back({nodes[a], nodes[b], ke[a][b]});
      }
    }
  }
  return CsrMatrix::from_triplets(grid.num_nodes(), grid.num_nodes(), std::move(entries), true);
}

std::vector<Index> side_nodes(const StructuredGrid& grid, Side side) {
  std::vector<Index> nodes;
  switch (side) {
    case Side::left:
      for (Index j = 0; j <= grid.ny; ++j) nodes.push_back(grid.node(0, j));
      break;
    case Side::right:
      for (Index j = 0; j <= grid.ny; ++j) nodes.push_back(grid.node(grid.nx, j));
      break;
    case Side::bottom:
      for (Index i = 0; i <= grid.nx; ++i) nodes.push_back(grid.node(i, 0));
      break;
    case Side::top:
      for (Index i = 0; i <= grid.nx; ++i) nodes.push_back(grid.node(i, grid.ny));
      break;
  }
  return nodes;
}

namespace {

double side_length_step(const StructuredGrid& grid, Side side) {
  return (side == Side::left || side == Side::right) ? grid.hy() : grid.hx();
}

}  // namespace

LinearSystem assemble(const StructuredGrid& grid, const DiffusionField& field,
                      const BoundarySpec& bc, std::span<const double> source) {
  require(source.size() == grid.num_elements(), ErrorCode::dimension_mismatch,
          "assemble: source must have one value per element");
  require(bc.has_dirichlet(), ErrorCode::singular_system,
          "assemble: at least one side must be Dirichlet (pure Neumann system is singular)");

  LinearSystem sys;
  sys.stiffness = assemble_stiffness(grid, field);
  const Index n = grid.num_nodes();

  sys.load.assign(n, 0.0);
  const double quarter_area = 0.25 * grid.hx() * grid.hy();
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      for (Index node : grid.element_nodes(i, j)) sys.load[node] += source[grid.element(i, j)] * quarter_area;
    }
  }
  for (Side side : {Side::left, Side::right, Side::bottom, Side::top}) {
    const auto& cond = bc[side];
    if (cond.kind != BoundaryCondition::Kind::neumann || cond.value == 0.0) continue;
    const auto nodes = side_nodes(grid, side);
    const double half = 0.5 * cond.value * side_length_step(grid, side);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      sys.load[nodes[k]] += half;
      sys.load[nodes[k + 1]] += half;
    }
  }

  sys.dirichlet.assign(n, false);
  Vector u_d(n, 0.0);
  for (Side side : {Side::left, Side::right, Side::bottom, Side::top}) {
    const auto& cond = bc[side];
    if (cond.kind != BoundaryCondition::Kind::dirichlet) continue;
    for (Index node : side_nodes(grid, side)) {
      sys.dirichlet[node] = true;
      if (bc.dirichlet_profile) {
        const double x = static_cast<double>(node % (grid.nx + 1)) * grid.hx();
        const double y = static_cast<double>(node / (grid.nx + 1)) * grid.hy();
        u_d[node] = bc.dirichlet_profile(x, y);
      } else {
        u_d[node] = cond.value;
      }
    }
  }

  // Symmetric elimination: Dirichlet rows and columns become identity, the
  // couplings move to the right-hand side.
  const CsrMatrix& k = sys.stiffness;
  sys.rhs = sys.load;
  std::vector<Index> offsets(n + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(k.nnz());
  vals.reserve(k.nnz());
  for (Index i = 0; i < n; ++i) {
    if (sys.dirichlet[i]) {
      cols.push_back(i);
      vals.push_back(1.0);
      sys.rhs[i] = u_d[i];
    } else {
      auto rc = k.row_cols(i);
      auto rv = k.row_values(i);
      for (std::size_t q = 0; q < rc.size(); ++q) {
        if (sys.dirichlet[rc[q]]) {
          sys.rhs[i] -= rv[q] * u_d[rc[q]];
        } else {
          cols.push_back(rc[q]);
          vals.push_back(rv[q]);
        }
      }
    }
    offsets[i + 1] = cols.size();
  }
  sys.matrix = CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals), true);
  return sys;
}

LinearSystem assemble(const StructuredGrid& grid, const DiffusionField& field,
                      const BoundarySpec& bc, double source) {
  const Vector f(grid.num_elements(), source);
  return assemble(grid, field, bc, f);
}

double boundary_flux(const LinearSystem& sys, const StructuredGrid& grid, std::span<const double> x,
                     Side side) {
  const Vector kx = spmv(sys.stiffness, x);
  double flux = 0.0;
  for (Index node : side_nodes(grid, side)) flux += kx[node] - sys.load[node];
  return flux;
}

double side_mean(const StructuredGrid& grid, std::span<const double> x, Side side) {
  require(x.size() == grid.num_nodes(), ErrorCode::dimension_mismatch, "side_mean: size mismatch");
  const auto nodes = side_nodes(grid, side);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) s += 0.5 * (x[nodes[k]] + x[nodes[k + 1]]);
  return s / static_cast<double>(nodes.size() - 1);
}

}  // namespace mgmpcg
