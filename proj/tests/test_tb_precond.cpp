// SPDX-License-Identifier: Apache-2.0
#include <helm/band_lu.hpp>
#include <helm/helmholtz.hpp>
#include <helm/solvers.hpp>
#include <helm/tb_precond.hpp>

#include <doctest.h>

#include <set>

#include "test_util.hpp"

using namespace helm;
using namespace testutil;

namespace {

AssembledSystem helmholtz_system(Index m, Real k) {
  ProblemSpec p;
  p.grid = make_grid(2, m);
  p.k.assign(p.grid.num_nodes(), k);
  p.g.resize(m);
  for (Index i = 0; i < m; ++i) p.g[i] = std::sin(3.0 * M_PI * p.grid.coord(i));
  p.mask = mask_from_shape(p.grid, CubeShape{{0.5, 0.5, 0.5}, 0.25});
  return assemble(p);
}

ComplexVector qt_apply(const RealMatrix& q, std::span<const Complex> r) {
  ComplexVector y(q.cols);
  for (Index i = 0; i < q.rows; ++i)
    for (Index j = 0; j < q.cols; ++j) y[j] += q(i, j) * r[i];
  return y;
}

}  // namespace

TEST_CASE("column selection") {
  TbOptions opt;
  auto nat = select_columns(128, opt);
  REQUIRE(nat.size() == 32);
  for (Index i = 0; i < 32; ++i) CHECK(nat[i] == i);
  opt.selection = TbSelection::random;
  opt.seed = 4;
  auto r1 = select_columns(128, opt), r2 = select_columns(128, opt);
  CHECK(r1 == r2);
  CHECK(std::set<Index>(r1.begin(), r1.end()).size() == 32);
  for (auto c : r1) CHECK(c < 128);
  opt.selection = TbSelection::custom;
  opt.s = 2;
  opt.columns = {5, 1};
  CHECK(select_columns(8, opt) == std::vector<Index>{5, 1});
  opt.s = 1;
  opt.columns = {9};
  CHECK_THROWS(select_columns(8, opt));
  opt = {};
  opt.s = 40;
  CHECK_THROWS(select_columns(32, opt));
}

TEST_CASE("full identity basis gives the exact inverse") {
  auto sys = helmholtz_system(9, 4.0);
  const Index n = sys.size();
  auto t = RealMatrix::identity(n);
  TbOptions opt;
  opt.s = n;
  auto cs = build_tb(t, sys.a, opt);
  auto r = random_vector(n, 2);
  auto z = coarse_apply(cs, r);
  auto exact = BandLuFactorization::factor(sys.a).solve(r);
  CHECK(rel_diff(z, exact) < 1e-10);
}

TEST_CASE("coarse space properties") {
  auto sys = helmholtz_system(17, 6.0);
  const Index n = sys.size();
  auto basis = synthetic_basis(sys.grid, 40);
  REQUIRE(basis.rows == n);
  REQUIRE(basis.cols == 40);
  TbOptions opt;
  auto cs = build_tb(basis, sys.a, opt);
  CHECK(cs.size() == 32);

  // orthonormal columns
  Real worst = 0.0;
  for (Index a = 0; a < 32; ++a)
    for (Index b = 0; b < 32; ++b) {
      Real d = 0.0;
      for (Index i = 0; i < n; ++i) d += cs.q(i, a) * cs.q(i, b);
      worst = std::max(worst, std::abs(d - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-12);

  // A_c = Q^T A Q
  for (Index j : {0, 7, 31}) {
    ComplexVector qj(n);
    for (Index i = 0; i < n; ++i) qj[i] = cs.q(i, j);
    auto col = qt_apply(cs.q, sys.a.matvec(qj));
    for (Index i = 0; i < 32; ++i) CHECK(std::abs(col[i] - cs.ac(i, j)) <= 1e-10 * (1 + std::abs(col[i])));
  }

  // exact on range(A Q): C (A Q y) = Q y
  ComplexVector y = random_vector(32, 3), qy(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < 32; ++j) qy[i] += cs.q(i, j) * y[j];
  auto z = coarse_apply(cs, sys.a.matvec(qy));
  CHECK(rel_diff(z, qy) < 1e-10);

  // r orthogonal to range(Q) maps to 0
  auto r = random_vector(n, 5);
  auto coef = qt_apply(cs.q, r);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < 32; ++j) r[i] -= cs.q(i, j) * coef[j];
  CHECK(norm2(coarse_apply(cs, r)) < 1e-12 * norm2(r));

  auto c = tb_to_container(cs);
  CHECK(c.at("Q").shape == std::vector<std::uint64_t>{n, 32});
  CHECK(c.contains("A_c_re"));
  CHECK(c.contains("A_c_im"));
}

TEST_CASE("rank-deficient basis is reported") {
  auto sys = helmholtz_system(9, 3.0);
  auto basis = synthetic_basis(sys.grid, 4);
  for (Index i = 0; i < basis.rows; ++i) basis(i, 3) = 2.0 * basis(i, 1);
  TbOptions opt;
  opt.s = 4;
  CHECK_THROWS_AS(build_tb(basis, sys.a, opt), RankDeficientError);
}

TEST_CASE("two-level preconditioner") {
  auto sys = helmholtz_system(33, 6.0);
  const Index n = sys.size();
  TbOptions opt;
  auto cs = std::make_shared<const TbCoarseSpace>(build_tb(synthetic_basis(sys.grid, 32), sys.a, opt));

  SUBCASE("without a smoother both modes equal the coarse solve") {
    TbSmootherSpec none;
    none.kind = TbSmootherSpec::Kind::none;
    auto r = random_vector(n, 1);
    for (auto mode : {TwoLevelMode::additive, TwoLevelMode::multiplicative}) {
      auto m = two_level_preconditioner(cs, sys.a, none, mode);
      CHECK(max_abs_diff(m->apply(r), coarse_apply(*cs, r)) < 1e-14);
    }
  }

  SUBCASE("linear and zero-preserving") {
    auto m = two_level_preconditioner(cs, sys.a);
    CHECK(m->linear());
    auto x = random_vector(n, 2), y = random_vector(n, 3);
    const Complex al{1.5, -0.5}, be{-0.25, 2.0};
    ComplexVector comb(n), expect(n);
    auto mx = m->apply(x), my = m->apply(y);
    for (Index i = 0; i < n; ++i) {
      comb[i] = al * x[i] + be * y[i];
      expect[i] = al * mx[i] + be * my[i];
    }
    CHECK(rel_diff(m->apply(comb), expect) < 1e-12);
    CHECK(norm2(m->apply(ComplexVector(n))) == 0.0);
  }

  SUBCASE("GMRES converges in one step on a coarse-range rhs") {
    TbSmootherSpec none;
    none.kind = TbSmootherSpec::Kind::none;
    auto m = two_level_preconditioner(cs, sys.a, none);
    ComplexVector qy(n);
    auto y = random_vector(32, 9);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < 32; ++j) qy[i] += cs->q(i, j) * y[j];
    auto b = sys.a.matvec(qy);
    auto res = gmres(sys.a, b, m.get(), {});
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
  }

  SUBCASE("fewer GMRES iterations than unpreconditioned") {
    SolveControl c;
    c.tol = 1e-10;
    auto plain = gmres(sys.a, sys.rhs, nullptr, c);
    auto m = two_level_preconditioner(cs, sys.a);
    auto tb = gmres(sys.a, sys.rhs, m.get(), c);
    CHECK(plain.report.converged);
    CHECK(tb.report.converged);
    CHECK(tb.report.iterations < plain.report.iterations);
  }
}
