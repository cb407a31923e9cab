// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/problem_config.hpp>
#include <helm/runner.hpp>

#include <filesystem>
#include <functional>

namespace helm {

/// Benchmark suites: cube, submarine, sweep_k, relaxation_divergence, mg_compare.
struct BenchSuite {
  std::string name;
  nlohmann::json problem;         // base problem JSON
  std::vector<RunSpec> cells;
  std::vector<Real> k_list;       // sweep_k only
  std::shared_ptr<const DeepOnetWeights> weights;
};

struct BenchRow {
  std::string solver;
  std::string precond;
  Real k_mean = 0.0;
  ConvergenceReport report;
  std::string error;  // non-empty when the cell failed
};

struct BenchResult {
  std::string suite;
  std::vector<BenchRow> rows;
  std::vector<std::string> notices;  // skipped cells and similar
};

const std::vector<std::string>& suite_names();

/// Default suite definition. `problem` overrides the base problem when not
/// null; `m` overrides the grid size when nonzero.
BenchSuite make_suite(const std::string& name, const nlohmann::json& problem = nullptr, Index m = 0,
                      std::shared_ptr<const DeepOnetWeights> weights = nullptr);

/// Runs every cell on one shared assembled system and one shared direct
/// reference per wave number. Cell failures are recorded and the suite
/// continues; cells needing weights are skipped with a notice when none
/// are supplied.
BenchResult run_suite(const BenchSuite& suite, const std::function<void(const std::string&)>& log = {});

/// CSV columns: solver,precond,k_mean,iterations,time_s,rel_l2_error,converged
std::string bench_csv(const BenchResult& r);
nlohmann::json bench_json(const BenchResult& r);

/// Writes <dir>/<suite>.csv, <dir>/<suite>.json and per-cell residual
/// histories under <dir>/<suite>_history/.
void write_bench(const std::filesystem::path& dir, const BenchResult& r);

}  // namespace helm
