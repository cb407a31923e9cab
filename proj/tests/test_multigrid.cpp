// SPDX-License-Identifier: Apache-2.0
#include <helm/band_lu.hpp>
#include <helm/deeponet.hpp>
#include <helm/helmholtz.hpp>
#include <helm/multigrid.hpp>
#include <helm/no_preconditioner.hpp>
#include <helm/solvers.hpp>

#include <doctest.h>

#include "test_util.hpp"

using namespace helm;
using namespace testutil;

namespace {

AssembledSystem poisson(int dim, Index m) { return assemble(manufactured_problem(make_grid(dim, m), 0.0).spec); }

}  // namespace

TEST_CASE("Galerkin coarse operator equals the dense triple product") {
  for (int dim : {1, 2}) {
    auto sys = poisson(dim, dim == 1 ? 5 : 9);
    auto h = MgHierarchy::build(sys.a, sys.grid);
    REQUIRE(h.num_levels() >= 2);
    const auto& f = h.level(0);
    const auto& c = h.level(1);
    const Index nf = f.a.nrows(), nc = c.a.nrows();
    auto A = f.a.to_dense(), P = f.p.to_dense(), R = f.r.to_dense();
    auto rap = dense_matmul(R, dense_matmul(A, P, nf, nf, nc), nc, nf, nc);
    auto ac = c.a.to_dense();
    for (Index i = 0; i < nc; ++i) {
      bool empty = true;
      for (Index j = 0; j < nc; ++j) empty &= rap[i * nc + j] == Complex{};
      for (Index j = 0; j < nc; ++j) {
        // rows with no coupling are pinned to the identity
        const Complex want = empty ? Complex{i == j ? 1.0 : 0.0} : rap[i * nc + j];
        CHECK(std::abs(ac[i * nc + j] - want) <= 1e-9 * (1 + std::abs(want)));
      }
    }
    // R = P^T / 2^d
    const Real w = 1.0 / static_cast<Real>(1 << dim);
    for (Index i = 0; i < nc; ++i)
      for (Index j = 0; j < nf; ++j) CHECK(R[i * nf + j] == w * P[j * nc + i]);
  }
}

TEST_CASE("1D interior coarse stencil is the rediscretized Laplacian") {
  // Full weighting with linear interpolation reproduces [1, -2, 1] / H^2.
  auto sys = poisson(1, 9);
  auto h = MgHierarchy::build(sys.a, sys.grid, {2, 2.0 / 3.0, 2, 2});
  const auto& ac = h.level(1).a;
  const Real hf = 1.0 / 8.0, H = 2 * hf;
  // interior node 2 of the m=5 grid
  const Complex d = ac.at(2, 2), o = ac.at(2, 1);
  CHECK(std::abs(d + 2.0 * o) < 1e-9 * std::abs(d));
  CHECK(std::abs(o.real() - 1.0 / (H * H)) < 1e-9 / (H * H));
}

TEST_CASE("single-level hierarchy is a direct solve") {
  auto sys = poisson(2, 9);
  auto h = std::make_shared<MgHierarchy>(MgHierarchy::build(sys.a, sys.grid, {1, 2.0 / 3.0, 2, 2}));
  CHECK(h->num_levels() == 1);
  auto m = vcycle_preconditioner(h);
  auto r = random_vector(sys.size(), 4);
  auto exact = BandLuFactorization::factor(sys.a).solve(r);
  CHECK(rel_diff(m->apply(r), exact) < 1e-12);
}

TEST_CASE("coarsening limits") {
  auto sys = poisson(2, 9);
  CHECK(MgHierarchy::build(sys.a, sys.grid).num_levels() == 3);  // 9, 5, 3
  CHECK_THROWS_AS(MgHierarchy::build(sys.a, sys.grid, {4, 2.0 / 3.0, 2, 2}), ConfigError);
  auto even = poisson(2, 8);
  CHECK_THROWS_AS(MgHierarchy::build(even.a, even.grid, {2, 2.0 / 3.0, 2, 2}), ConfigError);
  CHECK(MgHierarchy::build(even.a, even.grid).num_levels() == 1);
  CHECK_THROWS_AS(MgHierarchy::build(sys.a, sys.grid, {0, 2.5, 2, 2}), ConfigError);
}

TEST_CASE("V-cycle is linear and mesh-independent on Poisson") {
  Index iters[2];
  int idx = 0;
  for (Index m : {17, 33}) {
    auto sys = poisson(2, m);
    auto h = std::make_shared<MgHierarchy>(MgHierarchy::build(sys.a, sys.grid));
    auto mg = vcycle_preconditioner(h);
    CHECK(mg->linear());
    CHECK(mg->name() == "mg");
    const Index n = sys.size();
    CHECK(norm2(mg->apply(ComplexVector(n))) == 0.0);
    auto x = random_vector(n, 1), y = random_vector(n, 2);
    ComplexVector comb(n), expect(n);
    auto mx = mg->apply(x), my = mg->apply(y);
    for (Index i = 0; i < n; ++i) {
      comb[i] = Complex{0, 2} * x[i] - 0.5 * y[i];
      expect[i] = Complex{0, 2} * mx[i] - 0.5 * my[i];
    }
    CHECK(rel_diff(mg->apply(comb), expect) < 1e-12);

    auto res = gmres(sys.a, sys.rhs, mg.get(), {});
    CHECK(res.report.converged);
    iters[idx++] = res.report.iterations;
  }
  CHECK(iters[1] <= iters[0] + 3);
}

TEST_CASE("2-1-2 schedule with a zero network equals V(2,2)") {
  ProblemSpec p;
  p.grid = make_grid(2, 33);
  p.k.assign(p.grid.num_nodes(), 6.0);
  p.g.assign(33, 1.0);
  auto sys = assemble(p);
  auto h = std::make_shared<MgHierarchy>(MgHierarchy::build(sys.a, sys.grid));
  auto w = std::make_shared<DeepOnetWeights>(DeepOnetWeights::zeros(DeepOnetMeta::default_2d(8)));
  auto no = make_no_preconditioner(w, sys);
  auto hyb = hybrid_smoother_212(h, no);
  CHECK_FALSE(hyb->linear());
  CHECK(hyb->name() == "deeponet-mg");
  CHECK_THROWS_AS(hybrid_smoother_212(h, nullptr), ConfigError);

  auto v22 = vcycle_preconditioner(h);
  SolveControl c;
  c.max_iters = 10;
  c.tol = 1e-30;
  auto a = richardson(sys.a, sys.rhs, *v22, c);
  auto b = richardson(sys.a, sys.rhs, *hyb, c);
  REQUIRE(a.report.residual_history.size() == b.report.residual_history.size());
  for (Index i = 0; i < a.report.residual_history.size(); ++i)
    CHECK(b.report.residual_history[i] == doctest::Approx(a.report.residual_history[i]).epsilon(1e-12));
}

TEST_CASE("finest level performs five smoothing-type steps in the 2-1-2 cycle") {
  // Count preconditioner invocations of the finest-level correction.
  auto sys = poisson(2, 9);
  auto h = std::make_shared<MgHierarchy>(MgHierarchy::build(sys.a, sys.grid));
  int calls = 0;
  auto counter = std::make_shared<FunctionPreconditioner>(
      [&calls](std::span<const Complex>, std::span<Complex> z) {
        ++calls;
        std::fill(z.begin(), z.end(), Complex{});
      },
      true, "count");
  MgPreconditioner mg(h, counter);
  auto z = mg.apply(random_vector(sys.size(), 3));
  CHECK(calls == 1);
  CHECK(h->options().pre_sweeps + 1 + h->options().post_sweeps == 5);
}
