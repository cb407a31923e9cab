// SPDX-License-Identifier: Apache-2.0
#include <helm/band_lu.hpp>
#include <helm/helmholtz.hpp>
#include <helm/relaxation.hpp>

#include <doctest.h>

#include <cmath>

#include "test_util.hpp"

using namespace helm;
using namespace testutil;

namespace {

ProblemSpec constant_problem(int dim, Index m, Real k) {
  ProblemSpec p;
  p.grid = make_grid(dim, m);
  p.k.assign(p.grid.num_nodes(), k);
  return p;
}

Real max_error(const ComplexVector& u, const ComplexVector& exact) { return max_abs_diff(u, exact); }

Real manufactured_error(int dim, Index m, Real k) {
  auto mp = manufactured_problem(make_grid(dim, m), k);
  auto sys = assemble(mp.spec);
  auto lu = BandLuFactorization::factor(sys.a);
  return max_error(lu.solve(sys.rhs), mp.exact);
}

}  // namespace

TEST_CASE("interior stencil entries") {
  auto p = constant_problem(2, 9, 3.0);
  auto sys = assemble(p);
  const Real h = 1.0 / 8.0;
  const Index c = p.grid.index({4, 4, 0});
  CHECK(sys.a.at(c, c) == Complex{9.0 - 4.0 / (h * h), 0.0});
  for (Index nb : {c - 1, c + 1, c - 9, c + 9}) CHECK(sys.a.at(c, nb) == Complex{1.0 / (h * h), 0.0});
  CHECK(sys.a.at(c, c + 2) == Complex{});
  CHECK(sys.rhs[c] == Complex{});
}

TEST_CASE("Sommerfeld boundary rows follow ghost elimination") {
  const Index m = 9;
  const Real k = 2.5, h = 1.0 / 8.0;
  auto p = constant_problem(2, m, k);
  auto sys = assemble(p);
  // Oracle: write the 5-point equation with ghost values and substitute
  // u_g = u_in + 2h i k u_b on each absorbing face.
  const Complex I{0.0, 1.0};
  for (Index node : {p.grid.index({0, 4, 0}), p.grid.index({8, 3, 0}), p.grid.index({5, 0, 0})}) {
    const Complex diag = k * k - 4.0 / (h * h) + 2.0 * I * k / h;
    CHECK(std::abs(sys.a.at(node, node) - diag) <= 1e-12 * std::abs(diag));
  }
  // left face node: inner neighbour weight doubles
  const Index l = p.grid.index({0, 4, 0});
  CHECK(sys.a.at(l, l + 1) == Complex{2.0 / (h * h), 0.0});
  CHECK(sys.a.at(l, l + m) == Complex{1.0 / (h * h), 0.0});
  // corner on two absorbing faces
  const Index c = p.grid.index({0, 0, 0});
  const Complex cd = k * k - 4.0 / (h * h) + 4.0 * I * k / h;
  CHECK(std::abs(sys.a.at(c, c) - cd) <= 1e-12 * std::abs(cd));
}

TEST_CASE("Neumann data on the top face") {
  const Index m = 9;
  auto p = constant_problem(2, m, 1.0);
  p.g.resize(m);
  for (Index i = 0; i < m; ++i) p.g[i] = 0.5 * static_cast<Real>(i);
  auto sys = assemble(p);
  const Real h = 1.0 / 8.0;
  for (Index i = 1; i + 1 < m; ++i) {
    const Index node = p.grid.index({i, m - 1, 0});
    CHECK(sys.rhs[node] == Complex{-2.0 * p.g[i] / h, 0.0});
    CHECK(sys.a.at(node, node) == Complex{1.0 - 4.0 / (h * h), 0.0});
    CHECK(sys.a.at(node, node - m) == Complex{2.0 / (h * h), 0.0});
  }
  p.g.resize(m + 1);
  CHECK_THROWS_AS(assemble(p), DimensionError);
}

TEST_CASE("1D first-order Neumann structure") {
  // u'' + k^2 u = 0 on [0,1] with Neumann at both ends, first-order ghosts.
  const Index m = 6;
  auto p = constant_problem(1, m, 2.0);
  p.set_bc(Face::left, BoundaryKind::neumann);
  p.set_bc(Face::right, BoundaryKind::neumann);
  p.order = BoundaryOrder::first;
  auto sys = assemble(p);
  const Real h = 0.2, ih2 = 1.0 / (h * h);
  CHECK(sys.a.at(0, 0) == Complex{4.0 - ih2, 0.0});
  CHECK(sys.a.at(0, 1) == Complex{ih2, 0.0});
  CHECK(sys.a.at(5, 5) == Complex{4.0 - ih2, 0.0});
  CHECK(sys.a.at(5, 4) == Complex{ih2, 0.0});
  for (Index i = 1; i < 5; ++i) {
    CHECK(sys.a.at(i, i) == Complex{4.0 - 2.0 * ih2, 0.0});
    CHECK(sys.a.at(i, i - 1) == Complex{ih2, 0.0});
    CHECK(sys.a.at(i, i + 1) == Complex{ih2, 0.0});
  }
}

TEST_CASE("scatterer and Dirichlet rows are identity rows") {
  auto p = constant_problem(2, 17, 4.0);
  p.mask = mask_from_shape(p.grid, CubeShape{{0.5, 0.5, 0.5}, 0.25});
  p.f.assign(p.grid.num_nodes(), Complex{1.0, 1.0});
  auto sys = assemble(p);
  CHECK(sys.dirichlet_rows.size() == p.mask.count());
  for (Index r : sys.dirichlet_rows) {
    CHECK(p.mask.inside(r));
    CHECK(sys.a.at(r, r) == Complex{1.0, 0.0});
    CHECK(sys.rhs[r] == Complex{});
    CHECK(sys.a.row_offsets()[r + 1] - sys.a.row_offsets()[r] == 1);
  }
  // solution vanishes on the scatterer
  auto u = BandLuFactorization::factor(sys.a).solve(sys.rhs);
  for (Index r : sys.dirichlet_rows) CHECK(std::abs(u[r]) <= 1e-12 * norm_inf(u));

  // a relaxation sweep leaves the residual zero at identity rows
  RelaxationPreconditioner jac(sys.a, {RelaxationKind::jacobi, 1.0, 1});
  ComplexVector r0 = sys.rhs;
  auto z = jac.apply(r0);
  auto r1 = residual(sys, z);
  for (Index r : sys.dirichlet_rows) CHECK(std::abs(r1[r]) <= 1e-14);
}

TEST_CASE("manufactured solution converges at second order") {
  for (int dim : {1, 2}) {
    const Real e1 = manufactured_error(dim, 17, 3.0);
    const Real e2 = manufactured_error(dim, 33, 3.0);
    const Real ratio = e1 / e2;
    CAPTURE(dim);
    CAPTURE(ratio);
    CHECK(ratio >= 3.2);
    CHECK(ratio <= 4.8);
  }
  const Real e3 = manufactured_error(3, 9, 3.0) / manufactured_error(3, 17, 3.0);
  CHECK(e3 >= 3.2);
  CHECK(e3 <= 4.8);
}

TEST_CASE("k = 0 reduces to the Poisson stencil") {
  auto mp = manufactured_problem(make_grid(2, 33), 0.0);
  auto sys = assemble(mp.spec);
  const Index c = mp.spec.grid.index({16, 16, 0});
  CHECK(sys.a.at(c, c) == Complex{-4.0 * 32.0 * 32.0, 0.0});
  auto u = BandLuFactorization::factor(sys.a).solve(sys.rhs);
  CHECK(max_abs_diff(u, mp.exact) < 2e-3);
}

TEST_CASE("size mismatches are reported") {
  auto p = constant_problem(2, 9, 1.0);
  p.k.pop_back();
  CHECK_THROWS_AS(assemble(p), DimensionError);
  p = constant_problem(2, 9, 1.0);
  p.f.assign(5, Complex{});
  CHECK_THROWS_AS(assemble(p), DimensionError);
  p = constant_problem(2, 9, 1.0);
  auto sys = assemble(p);
  CHECK_THROWS_AS(residual(sys, ComplexVector(3)), DimensionError);
}
