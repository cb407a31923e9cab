// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/csr_matrix.hpp>
#include <helm/grid.hpp>
#include <helm/scatterer.hpp>

#include <array>

namespace helm {

enum class BoundaryKind : std::uint8_t { sommerfeld, neumann, dirichlet };

/// Ghost-node elimination order for Robin/Neumann faces. `first` uses a
/// one-sided difference and exists for debugging.
enum class BoundaryOrder : std::uint8_t { second, first };

/// Discrete Helmholtz problem  Δu + k² u = f  on [0,1]^d with
///   ∂u/∂n - i k u = 0 on absorbing faces,
///   ∂u/∂n = g         on the incoming (Neumann) face,
///   u = 0             on scatterer nodes.
struct ProblemSpec {
  StructuredGrid grid;
  RealVector k;     // per node, > 0 where used
  ComplexVector f;  // per node; empty means zero forcing
  /// Neumann data on the incoming face, indexed by the face grid
  /// (remaining axes in order). Empty means zero.
  RealVector g;
  ScattererMask mask;  // empty mask means non-scattering
  std::array<BoundaryKind, 6> face_bc{BoundaryKind::sommerfeld, BoundaryKind::sommerfeld,
                                      BoundaryKind::sommerfeld, BoundaryKind::neumann,
                                      BoundaryKind::sommerfeld, BoundaryKind::sommerfeld};
  /// Values on Dirichlet-face nodes (per node); empty means zero.
  ComplexVector dirichlet_values;
  BoundaryOrder order = BoundaryOrder::second;

  BoundaryKind bc(Face f) const { return face_bc[static_cast<std::size_t>(f)]; }
  void set_bc(Face f, BoundaryKind k) { face_bc[static_cast<std::size_t>(f)] = k; }
};

/// A u = rhs plus the identity rows (scatterer and Dirichlet faces).
struct AssembledSystem {
  StructuredGrid grid;
  ComplexCsrMatrix a;
  ComplexVector rhs;
  std::vector<Index> dirichlet_rows;
  RealVector k;  // wave number per node, kept for neural-operator inputs

  Index size() const { return rhs.size(); }
};

AssembledSystem assemble(const ProblemSpec& spec);

/// r = rhs - A u
ComplexVector residual(const AssembledSystem& sys, std::span<const Complex> u);

struct ManufacturedProblem {
  ProblemSpec spec;
  ComplexVector exact;  // u*(x) = prod_d sin(pi x_d)
};

/// All-Dirichlet problem with exact solution prod_d sin(pi x_d) and
/// f = (k² - d π²) u*.
ManufacturedProblem manufactured_problem(const StructuredGrid& grid, Real k_const);

}  // namespace helm
