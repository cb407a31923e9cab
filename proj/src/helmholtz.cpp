// SPDX-License-Identifier: Apache-2.0
#include <helm/helmholtz.hpp>

#include <cmath>
#include <numbers>

namespace helm {

namespace {

// Index of node within the grid of face `f` (remaining axes in order).
Index face_local_index(const StructuredGrid& g, Index node, Face f) {
  if (g.dim() == 1) return 0;
  auto ijk = g.multi_index(node);
  const int ax = StructuredGrid::face_axis(f, g.dim());
  Index idx = 0, stride = 1;
  for (int a = 0; a < g.dim(); ++a) {
    if (a == ax) continue;
    idx += ijk[static_cast<Index>(a)] * stride;
    stride *= g.nodes_per_axis();
  }
  return idx;
}

Face face_on_axis(int axis, bool upper, int dim) {
  for (Face f : kAllFaces)
    if (StructuredGrid::face_axis(f, dim) == axis && StructuredGrid::face_is_upper(f) == upper) return f;
  throw DimensionError("assemble: no face for axis");
}

}  // namespace

AssembledSystem assemble(const ProblemSpec& spec) {
  const auto& g = spec.grid;
  const Index n = g.num_nodes(), m = g.nodes_per_axis();
  const Real h = g.spacing(), h2 = h * h;
  const Complex I{0.0, 1.0};
  require(spec.k.size() == n, "assemble: k field size does not match grid");
  require(spec.f.empty() || spec.f.size() == n, "assemble: f field size does not match grid");
  require(spec.mask.size() == 0 || spec.mask.size() == n, "assemble: mask size does not match grid");
  require(spec.dirichlet_values.empty() || spec.dirichlet_values.size() == n,
          "assemble: dirichlet values size does not match grid");
  const Index face_nodes = g.dim() == 1 ? 1 : n / m;
  require(spec.g.empty() || spec.g.size() == face_nodes, "assemble: g field size does not match the face grid");

  AssembledSystem sys;
  sys.grid = g;
  sys.k = spec.k;
  sys.rhs.assign(n, Complex{});
  std::vector<Triplet> t;
  t.reserve(n * (2 * static_cast<Index>(g.dim()) + 1));

  for (Index node = 0; node < n; ++node) {
    const bool scat = spec.mask.size() != 0 && spec.mask.inside(node);
    bool dirichlet_face = false;
    if (!scat) {
      for (Face f : g.faces(node))
        if (spec.bc(f) == BoundaryKind::dirichlet) dirichlet_face = true;
    }
    if (scat || dirichlet_face) {
      t.push_back({node, node, Complex{1.0, 0.0}});
      sys.rhs[node] = scat || spec.dirichlet_values.empty() ? Complex{} : spec.dirichlet_values[node];
      sys.dirichlet_rows.push_back(node);
      continue;
    }

    const Real kn = spec.k[node];
    Complex diag{kn * kn, 0.0};
    Complex rhs = spec.f.empty() ? Complex{} : spec.f[node];
    auto ijk = g.multi_index(node);
    Index stride = 1;
    for (int a = 0; a < g.dim(); ++a) {
      const Index i = ijk[static_cast<Index>(a)];
      if (i > 0 && i < m - 1) {
        diag -= 2.0 / h2;
        t.push_back({node, node - stride, Complex{1.0 / h2, 0.0}});
        t.push_back({node, node + stride, Complex{1.0 / h2, 0.0}});
      } else {
        const bool upper = i == m - 1;
        const Face f = face_on_axis(a, upper, g.dim());
        const Index inner = upper ? node - stride : node + stride;
        const Real gv = spec.g.empty() ? 0.0 : spec.g[face_local_index(g, node, f)];
        const bool second = spec.order == BoundaryOrder::second;
        // Ghost value u_g eliminated from (u_g + u_in - 2 u_b) / h².
        if (second) {
          t.push_back({node, inner, Complex{2.0 / h2, 0.0}});
          diag -= 2.0 / h2;
          if (spec.bc(f) == BoundaryKind::sommerfeld) {
            diag += 2.0 * I * kn / h;  // u_g = u_in + 2h i k u_b
          } else {
            rhs -= 2.0 * gv / h;  // u_g = u_in + 2h g
          }
        } else {
          t.push_back({node, inner, Complex{1.0 / h2, 0.0}});
          diag -= 1.0 / h2;
          if (spec.bc(f) == BoundaryKind::sommerfeld) {
            diag += I * kn / h;  // u_g = u_b + h i k u_b
          } else {
            rhs -= gv / h;  // u_g = u_b + h g
          }
        }
      }
      stride *= m;
    }
    t.push_back({node, node, diag});
    sys.rhs[node] = rhs;
  }
  sys.a = ComplexCsrMatrix::from_triplets(n, n, std::move(t));
  return sys;
}

ComplexVector residual(const AssembledSystem& sys, std::span<const Complex> u) {
  require(u.size() == sys.size(), "residual: vector size does not match the system");
  ComplexVector r(sys.size());
  sys.a.residual(sys.rhs, u, r);
  return r;
}

ManufacturedProblem manufactured_problem(const StructuredGrid& grid, Real k_const) {
  const Index n = grid.num_nodes();
  const Real pi = std::numbers::pi;
  ManufacturedProblem mp;
  mp.spec.grid = grid;
  mp.spec.k.assign(n, k_const);
  mp.spec.f.resize(n);
  mp.spec.dirichlet_values.resize(n);
  mp.exact.resize(n);
  mp.spec.mask = ScattererMask::empty(grid);
  for (auto& bc : mp.spec.face_bc) bc = BoundaryKind::dirichlet;
  const Real lambda = k_const * k_const - static_cast<Real>(grid.dim()) * pi * pi;
  for (Index node = 0; node < n; ++node) {
    auto p = grid.point(node);
    Real u = 1.0;
    for (int a = 0; a < grid.dim(); ++a) u *= std::sin(pi * p[static_cast<Index>(a)]);
    mp.exact[node] = u;
    mp.spec.f[node] = lambda * u;
    mp.spec.dirichlet_values[node] = u;
  }
  return mp;
}

}  // namespace helm
