#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "mgmpcg/csr_matrix.hpp"

namespace mgmpcg {

/// Uniform nx x ny quadrilateral mesh of the unit square. Node (i, j) has
/// index j * (nx + 1) + i; element (i, j) has index j * nx + i.
struct StructuredGrid {
  Index nx = 1;
  Index ny = 1;

  StructuredGrid() = default;
  StructuredGrid(Index nx_, Index ny_);

  double hx() const { return 1.0 / static_cast<double>(nx); }
  double hy() const { return 1.0 / static_cast<double>(ny); }
  Index num_nodes() const { return (nx + 1) * (ny + 1); }
  Index num_elements() const { return nx * ny; }
  Index node(Index i, Index j) const { return j * (nx + 1) + i; }
  Index element(Index i, Index j) const { return j * nx + i; }

  /// Element node indices in counterclockwise order starting at the lower
  /// left corner.
  std::array<Index, 4> element_nodes(Index i, Index j) const;
};

/// Per-element diagonal diffusion tensor diag(kxx, kyy).
struct DiffusionField {
  std::vector<double> kxx;
  std::vector<double> kyy;

  static DiffusionField uniform(const StructuredGrid& grid, double kxx, double kyy);
  void validate(const StructuredGrid& grid) const;
};

enum class Side { left = 0, right = 1, bottom = 2, top = 3 };

struct BoundaryCondition {
  enum class Kind { dirichlet, neumann };
  Kind kind = Kind::dirichlet;
  double value = 0.0;  // u_D for Dirichlet, g_N for Neumann

  static BoundaryCondition dirichlet(double u) { return {Kind::dirichlet, u}; }
  static BoundaryCondition neumann(double g) { return {Kind::neumann, g}; }
};

/// Conditions on the four sides. Corner nodes touching a Dirichlet side are
/// Dirichlet; when two Dirichlet sides meet, the later side in the order
/// left, right, bottom, top supplies the value. `dirichlet_profile`, when
/// set, overrides the constant Dirichlet values with u_D(x, y).
struct BoundarySpec {
  std::array<BoundaryCondition, 4> sides{};
  std::function<double(double, double)> dirichlet_profile;

  static BoundarySpec all_dirichlet(double u);
  const BoundaryCondition& operator[](Side s) const { return sides[static_cast<int>(s)]; }
  BoundaryCondition& operator[](Side s) { return sides[static_cast<int>(s)]; }
  bool has_dirichlet() const;
};

using ElementMatrix = std::array<std::array<double, 4>, 4>;

/// Q1 stiffness of one hx x hy element for K = diag(kxx, kyy), 2x2 Gauss.
ElementMatrix element_stiffness(double kxx, double kyy, double hx, double hy);

/// Stiffness matrix without boundary conditions (pure Neumann operator).
CsrMatrix assemble_stiffness(const StructuredGrid& grid, const DiffusionField& field);

struct LinearSystem {
  CsrMatrix matrix;           // after symmetric Dirichlet elimination, SPD
  Vector rhs;
  std::vector<bool> dirichlet;
  CsrMatrix stiffness;        // before elimination
  Vector load;                // source plus Neumann fluxes, before elimination
};

/// Assembles A x = b. `source` holds one value of f per element.
LinearSystem assemble(const StructuredGrid& grid, const DiffusionField& field,
                      const BoundarySpec& bc, std::span<const double> source);
LinearSystem assemble(const StructuredGrid& grid, const DiffusionField& field,
                      const BoundarySpec& bc, double source = 0.0);

/// Nodes lying on one side of the square, in increasing order.
std::vector<Index> side_nodes(const StructuredGrid& grid, Side side);

/// Integral of K grad(u) . n over one side from the discrete reaction
/// (K x - F) at that side's nodes. Meaningful on Dirichlet sides.
double boundary_flux(const LinearSystem& sys, const StructuredGrid& grid, std::span<const double> x,
                     Side side);

/// Trapezoidal mean of the nodal values along one side.
double side_mean(const StructuredGrid& grid, std::span<const double> x, Side side);

}  // namespace mgmpcg
