// SPDX-License-Identifier: Apache-2.0
#include <helm/bench.hpp>

#include <helm/band_lu.hpp>

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace helm {

namespace {

RunSpec cell(std::string solver, std::string precond, std::optional<Real> omega = std::nullopt) {
  RunSpec s;
  s.solver = std::move(solver);
  s.precond = std::move(precond);
  s.omega = omega;
  return s;
}

std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string cell_key(const BenchRow& r) {
  std::string k = r.solver + "_" + r.precond + "_k" + format_real(r.k_mean);
  for (auto& c : k)
    if (c == '+' || c == '/' || c == ' ') c = '-';
  return k;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cube", "submarine", "sweep_k", "relaxation_divergence", "mg_compare"};
  return names;
}

BenchSuite make_suite(const std::string& name, const nlohmann::json& problem, Index m,
                      std::shared_ptr<const DeepOnetWeights> weights) {
  BenchSuite s;
  s.name = name;
  s.weights = std::move(weights);
  auto base = [&](int dim, Index default_m) {
    auto j = default_problem_json(dim, m ? m : default_m);
    if (!problem.is_null()) {
      j.update(problem);
      if (m) j["m"] = m;
    }
    return j;
  };
  const std::vector<RunSpec> krylov{cell("gmres", "none"),    cell("gmres", "tb"),        cell("bicgstab", "none"),
                                    cell("bicgstab", "ilu0"), cell("bicgstab", "tb"),     cell("gmres", "ilu0"),
                                    cell("jacobi", "deeponet"), cell("gmres", "deeponet-mg")};
  if (name == "cube") {
    s.problem = base(3, 17);
    s.cells = krylov;
  } else if (name == "submarine") {
    s.problem = base(3, 17);
    if (problem.is_null() || !problem.contains("scatterer"))
      s.problem["scatterer"] = nlohmann::json::array({{{"type", "capsule_sail"}}});
    s.cells = krylov;
  } else if (name == "sweep_k") {
    s.problem = base(2, 33);
    s.k_list = {6, 12, 18, 24, 30, 36};
    s.cells = {cell("gmres", "none"), cell("gmres", "tb"), cell("bicgstab", "none"), cell("bicgstab", "ilu0"),
               cell("bicgstab", "tb"), cell("bicgstab", "mg")};
  } else if (name == "relaxation_divergence") {
    s.problem = base(2, 33);
    for (const char* r : {"jacobi", "gs", "sor", "ssor"}) s.cells.push_back(cell(r, "none"));
    for (const char* r : {"jacobi", "gs", "sor", "ssor"}) s.cells.push_back(cell(r, "deeponet"));
  } else if (name == "mg_compare") {
    s.problem = base(2, 33);
    // V(3,2): five finest-level smoothing steps, the same count as 2-1-2.
    auto v5 = [](std::string solver, std::string precond) {
      auto c = cell(std::move(solver), std::move(precond));
      if (c.precond == "mg") c.mg_pre = 3;
      return c;
    };
    s.cells = {v5("gmres", "mg"), v5("bicgstab", "mg"), v5("richardson", "mg"), v5("richardson", "deeponet-mg"),
               v5("gmres", "deeponet-mg")};
  } else {
    throw ConfigError("unknown bench suite '" + name + "'");
  }
  for (auto& c : s.cells) {
    c.control.max_iters = c.solver == "gmres" || c.solver == "bicgstab" ? 5000 : 20000;
    // The neural-operator MG cycle is nonlinear; Krylov runs it in flexible mode.
    if (c.precond == "deeponet-mg" || c.precond == "deeponet") c.control.flexible = true;
  }
  return s;
}

BenchResult run_suite(const BenchSuite& suite, const std::function<void(const std::string&)>& log) {
  BenchResult out;
  out.suite = suite.name;
  auto say = [&](const std::string& s) {
    if (log) log(s);
  };
  std::vector<std::optional<Real>> targets;
  if (suite.k_list.empty())
    targets.push_back(std::nullopt);
  else
    for (Real k : suite.k_list) targets.emplace_back(k);

  for (const auto& target : targets) {
    auto pj = suite.problem;
    if (target) pj["k_target_mean"] = *target;
    const auto spec = problem_from_json(pj);
    const auto sys = assemble(spec);
    const Real k_mean = std::accumulate(spec.k.begin(), spec.k.end(), 0.0) / static_cast<Real>(spec.k.size());
    say("suite " + suite.name + ": n = " + std::to_string(sys.size()) + ", mean k = " + format_real(k_mean));
    const auto reference = BandLuFactorization::factor(sys.a).solve(sys.rhs);

    for (const auto& c : suite.cells) {
      BenchRow row;
      row.solver = c.solver;
      row.precond = c.precond;
      row.k_mean = k_mean;
      if (needs_weights(c) && !suite.weights) {
        const auto note = "skipped " + c.solver + "/" + c.precond + " (no weights supplied)";
        if (std::find(out.notices.begin(), out.notices.end(), note) == out.notices.end()) out.notices.push_back(note);
        continue;
      }
      try {
        auto res = run_config(sys, c, suite.weights, reference);
        row.report = std::move(res.report);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.report.solver = c.solver;
        row.report.preconditioner = c.precond;
      }
      say("  " + c.solver + "/" + c.precond + ": " +
          (row.error.empty() ? std::to_string(row.report.iterations) + " iterations, converged=" +
                                   (row.report.converged ? "true" : "false")
                             : "failed: " + row.error));
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::string bench_csv(const BenchResult& r) {
  std::ostringstream os;
  os << "solver,precond,k_mean,iterations,time_s,rel_l2_error,converged\n";
  for (const auto& row : r.rows) {
    os << row.solver << ',' << row.precond << ',' << format_real(row.k_mean) << ',' << row.report.iterations << ','
       << format_real(row.report.wall_time) << ','
       << (row.report.rel_l2_error ? format_real(*row.report.rel_l2_error) : std::string("nan")) << ','
       << (row.report.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

nlohmann::json bench_json(const BenchResult& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& row : r.rows) {
    auto j = to_json(row.report);
    j["solver_cell"] = row.solver;
    j["precond_cell"] = row.precond;
    j["k_mean"] = row.k_mean;
    if (!row.error.empty()) j["error"] = row.error;
    cells.push_back(std::move(j));
  }
  return {{"suite", r.suite}, {"cells", cells}, {"notices", r.notices}};
}

void write_bench(const std::filesystem::path& dir, const BenchResult& r) {
  std::filesystem::create_directories(dir / (r.suite + "_history"));
  {
    std::ofstream csv(dir / (r.suite + ".csv"));
    csv << bench_csv(r);
    if (!csv) throw Error("cannot write " + (dir / (r.suite + ".csv")).string());
  }
  {
    std::ofstream js(dir / (r.suite + ".json"));
    js << bench_json(r).dump(2) << '\n';
  }
  for (const auto& row : r.rows)
    if (!row.report.residual_history.empty())
      write_history_csv(dir / (r.suite + "_history") / (cell_key(row) + ".csv"), row.report);
}

}  // namespace helm
