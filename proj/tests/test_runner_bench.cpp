// SPDX-License-Identifier: Apache-2.0
#include <helm/band_lu.hpp>
#include <helm/bench.hpp>
#include <helm/deeponet.hpp>
#include <helm/helmholtz.hpp>
#include <helm/problem_config.hpp>
#include <helm/runner.hpp>

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace helm;
using namespace testutil;

namespace {

AssembledSystem default_system(Index m) { return assemble(problem_from_json(default_problem_json(2, m, 1))); }

RunSpec cell(const std::string& solver, const std::string& precond) {
  RunSpec r;
  r.solver = solver;
  r.precond = precond;
  return r;
}

}  // namespace

TEST_CASE("run_config covers the solver and preconditioner matrix") {
  auto sys = default_system(17);
  auto ref = BandLuFactorization::factor(sys.a).solve(sys.rhs);
  for (const auto& [s, p] : std::vector<std::pair<std::string, std::string>>{
           {"gmres", "none"}, {"gmres", "ilu0"}, {"gmres", "tb"}, {"gmres", "mg"},
           {"bicgstab", "none"}, {"bicgstab", "ilu0"}}) {
    CAPTURE(s);
    CAPTURE(p);
    auto res = run_config(sys, cell(s, p), nullptr, ref);
    CHECK(res.report.converged);
    REQUIRE(res.report.rel_l2_error.has_value());
    CHECK(*res.report.rel_l2_error < 1e-8);
  }
  auto jac = run_config(sys, cell("jacobi", "none"), nullptr);
  CHECK_FALSE(jac.report.converged);
  CHECK(default_omega("sor") == 1.5);
  CHECK(default_omega("jacobi") == 1.0);
  CHECK(is_relaxation("ssor"));
  CHECK_FALSE(is_relaxation("ilu0"));
  CHECK(relaxation_kind("gs") == RelaxationKind::gauss_seidel);
}

TEST_CASE("neural-operator cells need weights") {
  auto sys = default_system(9);
  CHECK(needs_weights(cell("jacobi", "deeponet")));
  CHECK(needs_weights(cell("gmres", "deeponet-mg")));
  CHECK_FALSE(needs_weights(cell("gmres", "tb")));
  try {
    run_config(sys, cell("jacobi", "deeponet"), nullptr);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("weights required") != std::string::npos);
  }
  CHECK_THROWS_AS(run_config(sys, cell("gmres", "bogus"), nullptr), ConfigError);
  CHECK_THROWS_AS(run_config(sys, cell("cg", "none"), nullptr), ConfigError);
}

TEST_CASE("hybrid cells run with random weights") {
  auto sys = default_system(33);
  auto w = std::make_shared<DeepOnetWeights>(DeepOnetWeights::random(DeepOnetMeta::default_2d(16), 2));
  auto spec = cell("jacobi", "deeponet");
  spec.control.max_iters = 50;
  auto res = run_config(sys, spec, w);
  CHECK(res.report.iterations > 0);
  CHECK(res.report.preconditioner.find("deeponet") != std::string::npos);
  auto mg = cell("gmres", "deeponet-mg");
  mg.control.flexible = true;
  mg.control.max_iters = 200;
  auto r2 = run_config(sys, mg, w);
  CHECK(r2.report.iterations > 0);
}

TEST_CASE("suite definitions") {
  for (const auto& name : suite_names()) {
    auto s = make_suite(name);
    CHECK(s.name == name);
    CHECK_FALSE(s.cells.empty());
  }
  CHECK(make_suite("sweep_k").k_list.size() == 6);
  CHECK_THROWS_AS(make_suite("nope"), ConfigError);
}

TEST_CASE("small suite run and CSV schema") {
  auto suite = make_suite("relaxation_divergence", nullptr, 9);
  for (auto& c : suite.cells) c.control.max_iters = 50;
  auto res = run_suite(suite);
  CHECK(res.rows.size() == 4);
  CHECK(res.notices.size() == 4);  // deeponet cells skipped
  for (const auto& r : res.rows) CHECK_FALSE(r.report.converged);

  auto csv = bench_csv(res);
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "solver,precond,k_mean,iterations,time_s,rel_l2_error,converged");
  Index rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == 4);

  auto dir = tmp_dir() / "bench";
  write_bench(dir, res);
  CHECK(std::filesystem::exists(dir / "relaxation_divergence.csv"));
  CHECK(std::filesystem::exists(dir / "relaxation_divergence.json"));
  CHECK(std::filesystem::is_directory(dir / "relaxation_divergence_history"));
  CHECK(bench_json(res)["cells"].size() == 4);
}

TEST_CASE("sweep_k runs one row per wave number and cell") {
  auto suite = make_suite("sweep_k", nullptr, 9);
  suite.k_list = {6.0, 12.0};
  suite.cells.resize(2);
  auto res = run_suite(suite);
  REQUIRE(res.rows.size() == 4);
  // k is rescaled by target / 6, so the realized means keep their ratio
  CHECK(res.rows[0].k_mean == doctest::Approx(6.0).epsilon(0.2));
  CHECK(res.rows[3].k_mean == doctest::Approx(2.0 * res.rows[0].k_mean).epsilon(1e-12));
  for (const auto& r : res.rows) CHECK(r.report.rel_l2_error.has_value());
}
