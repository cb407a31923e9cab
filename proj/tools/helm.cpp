// SPDX-License-Identifier: Apache-2.0
// helm: data generation, reference solves, solver runs and benchmarks.
#include <helm/bench.hpp>
#include <helm/datagen.hpp>
#include <helm/runner.hpp>
#include <helm/scatterer.hpp>

#include <CLI11.hpp>

#include <cstring>
#include <fstream>
#include <iostream>

namespace {

using namespace helm;

struct Common {
  std::string config;
  std::string weights;
  std::string out;
  std::uint64_t seed = 1;
  bool seed_set = false;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

nlohmann::json problem_json(const Common& c, int dim, Index m) {
  auto j = c.config.empty() ? default_problem_json(dim, m) : read_json(c.config);
  if (c.seed_set) j["seed"] = c.seed;
  return j;
}

std::shared_ptr<const DeepOnetWeights> maybe_weights(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<DeepOnetWeights>(load_weights(path));
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void inspect(const std::string& path, std::ostream& os) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  char magic[8] = {};
  in.read(magic, 8);
  if (std::memcmp(magic, "NOTENSR1", 8) == 0) {
    const auto header = read_container_header(path);
    os << path << ": NOTENSR1 tensor container\n";
    for (const auto& [name, entry] : header.items()) {
      if (name == "meta") continue;
      os << "  " << name << "  " << entry.value("dtype", "?") << " " << entry.value("shape", nlohmann::json::array()).dump()
         << "  offset=" << entry.value("offset", 0ull) << " nbytes=" << entry.value("nbytes", 0ull) << '\n';
    }
    if (header.contains("meta")) os << "  meta: " << header["meta"].dump(2) << '\n';
    // Full parse verifies offsets and checksums.
    read_container(path);
    os << "  checksums ok\n";
  } else if (std::memcmp(magic, "VOXMASK1", 8) == 0) {
    const auto h = inspect_voxel_mask(path);
    os << path << ": VOXMASK1 voxel mask, dims";
    for (auto d : h.dims) os << ' ' << d;
    os << '\n';
  } else {
    throw FormatError(path + ": unrecognized file (expected NOTENSR1 or VOXMASK1 magic)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz scattering solvers with neural-operator and trunk-basis preconditioning"};
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "Problem (or dataset) JSON file");
    sub->add_option("--out", c.out, "Output path");
    sub->add_option("--seed", c.seed, "Random seed")->each([&](const std::string&) { c.seed_set = true; });
  };

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a non-scattering training dataset");
  add_common(gen);
  int gen_dim = 2;
  Index gen_m = 0, gen_n = 0, gen_threads = 0;
  bool homogeneous = false;
  gen->add_option("--dim", gen_dim, "Dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  gen->add_option("--m", gen_m, "Nodes per axis");
  gen->add_option("--n", gen_n, "Number of samples");
  gen->add_option("--threads", gen_threads, "Worker threads (default: HELM_THREADS or all cores)");
  gen->add_flag("--homogeneous-g", homogeneous, "Use g = 0 on the incoming face");

  // reference
  auto* ref = app.add_subcommand("reference", "Direct solve of a problem");
  add_common(ref);

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver/preconditioner configuration");
  add_common(solve);
  RunSpec run;
  std::string reference_path;
  bool no_reference = false;
  Real tol = 1e-12;
  solve->add_option("--solver", run.solver, "Solver")
      ->check(CLI::IsMember({"jacobi", "gs", "sor", "ssor", "gmres", "bicgstab", "richardson"}));
  solve->add_option("--precond", run.precond, "Preconditioner")
      ->check(CLI::IsMember({"none", "jacobi", "gs", "sor", "ssor", "ilu0", "tb", "deeponet", "mg", "deeponet-mg"}));
  solve->add_option("--weights", c.weights, "DeepONet weights (NOTENSR1)");
  solve->add_option("--tb-size", run.tb_size, "Number of trunk-basis columns")->check(CLI::PositiveNumber);
  solve->add_option("--nr", run.nr, "Relaxation steps per neural-operator step")->check(CLI::PositiveNumber);
  solve->add_option("--omega", run.omega, "Relaxation factor");
  solve->add_option("--tol", tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", run.control.max_iters, "Iteration cap");
  solve->add_option("--restart", run.control.restart, "GMRES restart length")->check(CLI::PositiveNumber);
  solve->add_flag("--flexible", run.control.flexible, "Allow nonlinear preconditioners inside Krylov methods");
  solve->add_option("--reference", reference_path, "Reference solution container for the error column");
  solve->add_flag("--no-reference", no_reference, "Skip the direct reference solve");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  add_common(bench);
  std::string suite;
  std::vector<Real> k_list;
  Index bench_m = 0;
  bench->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  bench->add_option("--weights", c.weights, "DeepONet weights (NOTENSR1)");
  bench->add_option("--k-list", k_list, "Target mean wave numbers (sweep_k)")->delimiter(',');
  bench->add_option("--m", bench_m, "Override nodes per axis");

  // export-trunk
  auto* exp = app.add_subcommand("export-trunk", "Evaluate the trunk network at grid nodes");
  add_common(exp);
  Index exp_m = 0;
  exp->add_option("--weights", c.weights, "DeepONet weights (NOTENSR1)")->required();
  exp->add_option("--m", exp_m, "Nodes per axis (default: problem m)");

  // inspect
  auto* insp = app.add_subcommand("inspect", "Print a container or voxel-mask header");
  std::string inspect_path;
  insp->add_option("file", inspect_path, "File to inspect")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto spec = c.config.empty() ? DatasetSpec::defaults(gen_dim) : DatasetSpec::from_json(read_json(c.config));
      if (gen_m) spec.m = gen_m;
      if (gen_n) spec.n = gen_n;
      if (c.seed_set) spec.seed = c.seed;
      if (gen_threads) spec.threads = gen_threads;
      if (homogeneous) spec.homogeneous_g = true;
      spec.validate();
      if (c.out.empty()) throw ConfigError("gen-data: --out required");
      Index last_pct = 0;
      const auto data = generate_dataset(spec, [&](Index done, Index total) {
        const Index pct = done * 100 / total;
        if (pct >= last_pct + 10 || done == total) {
          last_pct = pct;
          std::cerr << "gen-data: " << done << "/" << total << '\n';
        }
      });
      write_container(c.out, data);
      std::cout << "wrote " << spec.n << " samples to " << c.out << '\n';
    } else if (ref->parsed()) {
      const auto pj = problem_json(c, 2, 33);
      const auto spec = problem_from_json(pj);
      const auto sys = assemble(spec);
      const auto u = BandLuFactorization::factor(sys.a).solve(sys.rhs);
      TensorContainer out;
      RealVector re(u.size()), im(u.size());
      for (Index i = 0; i < u.size(); ++i) {
        re[i] = u[i].real();
        im[i] = u[i].imag();
      }
      std::vector<std::uint64_t> shape(static_cast<Index>(spec.grid.dim()), spec.grid.nodes_per_axis());
      out.tensors["u_re"] = Tensor::from_f64(shape, re);
      out.tensors["u_im"] = Tensor::from_f64(shape, im);
      out.tensors["k"] = Tensor::from_f64(shape, spec.k);
      out.meta = {{"kind", "reference"}, {"problem", pj},
                  {"relative_residual", norm2(residual(sys, u)) / std::max(norm2(sys.rhs), 1e-300)}};
      const auto path = c.out.empty() ? std::string("reference.nten") : c.out;
      write_container(path, out);
      std::cout << "wrote reference solution (" << u.size() << " nodes) to " << path << '\n';
    } else if (solve->parsed()) {
      run.control.tol = tol;
      if (needs_weights(run) && c.weights.empty())
        throw ConfigError("--precond " + run.precond + ": weights required (pass --weights)");
      const auto spec = problem_from_json(problem_json(c, 2, 33));
      const auto sys = assemble(spec);
      ComplexVector reference;
      if (!reference_path.empty()) {
        const auto rc = read_container(reference_path);
        const auto re = rc.at("u_re").to_f64(), im = rc.at("u_im").to_f64();
        if (re.size() != sys.size()) throw ConfigError("reference solution size differs from the problem");
        reference.resize(re.size());
        for (Index i = 0; i < re.size(); ++i) reference[i] = {re[i], im[i]};
      } else if (!no_reference) {
        reference = BandLuFactorization::factor(sys.a).solve(sys.rhs);
      }
      const auto res = run_config(sys, run, maybe_weights(c.weights), reference);
      const auto& rep = res.report;
      std::cout << rep.solver << " + " << rep.preconditioner << ": " << rep.iterations << " iterations, "
                << (rep.converged ? "converged" : (rep.diverged ? "diverged" : "not converged"))
                << ", relative residual " << rep.final_residual();
      if (rep.rel_l2_error) std::cout << ", rel L2 error " << *rep.rel_l2_error;
      std::cout << ", " << rep.wall_time << " s\n";
      if (!rep.message.empty()) std::cout << rep.message << '\n';
      if (!c.out.empty()) {
        write_report_json(c.out, rep);
        write_history_csv(with_suffix(c.out, "_history.csv"), rep);
      }
    } else if (bench->parsed()) {
      auto problem = c.config.empty() ? nlohmann::json(nullptr) : read_json(c.config);
      if (c.seed_set) {
        if (problem.is_null()) problem = nlohmann::json::object();
        problem["seed"] = c.seed;
      }
      auto s = make_suite(suite, problem, bench_m, maybe_weights(c.weights));
      if (!k_list.empty()) {
        if (suite != "sweep_k") throw ConfigError("--k-list applies to the sweep_k suite only");
        s.k_list = k_list;
      }
      const auto result = run_suite(s, [](const std::string& line) { std::cerr << line << '\n'; });
      for (const auto& n : result.notices) std::cerr << "notice: " << n << '\n';
      const auto dir = c.out.empty() ? std::string("bench_out") : c.out;
      write_bench(dir, result);
      std::cout << bench_csv(result);
    } else if (exp->parsed()) {
      const auto w = load_weights(c.weights);
      const Index m = exp_m ? exp_m : problem_json(c, w.meta.dim, 33).value("m", Index{33});
      const auto grid = make_grid(w.meta.dim, m);
      const auto coords = node_coordinates(grid);
      const auto t = trunk_eval(w, coords);
      TensorContainer out;
      out.tensors["T"] = Tensor::from_f64({t.rows, t.cols}, t.data);
      out.tensors["coords"] = Tensor::from_f64({grid.num_nodes(), static_cast<Index>(grid.dim())}, coords);
      out.meta = {{"kind", "trunk_basis"}, {"dim", grid.dim()}, {"m", m}, {"p", t.cols}};
      const auto path = c.out.empty() ? std::string("trunk.nten") : c.out;
      write_container(path, out);
      std::cout << "wrote T (" << t.rows << " x " << t.cols << ") to " << path << '\n';
    } else if (insp->parsed()) {
      inspect(inspect_path, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
