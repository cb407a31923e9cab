// SPDX-License-Identifier: Apache-2.0
#include <helm/runner.hpp>

#include <helm/no_preconditioner.hpp>
#include <helm/relaxation.hpp>

namespace helm {

bool is_relaxation(const std::string& name) {
  return name == "jacobi" || name == "gs" || name == "sor" || name == "ssor";
}

RelaxationKind relaxation_kind(const std::string& name) {
  if (name == "jacobi") return RelaxationKind::jacobi;
  if (name == "gs") return RelaxationKind::gauss_seidel;
  if (name == "sor") return RelaxationKind::sor;
  if (name == "ssor") return RelaxationKind::ssor;
  throw ConfigError("unknown relaxation '" + name + "'");
}

Real default_omega(const std::string& relaxation) {
  return relaxation == "sor" || relaxation == "ssor" ? 1.5 : 1.0;
}

bool needs_weights(const RunSpec& spec) { return spec.precond == "deeponet" || spec.precond == "deeponet-mg"; }

namespace {

PreconditionerPtr relaxation(const AssembledSystem& sys, const std::string& name, const RunSpec& spec) {
  const Real omega = spec.omega.value_or(default_omega(name));
  return std::make_shared<RelaxationPreconditioner>(sys.a, RelaxationSpec{relaxation_kind(name), omega, 1});
}

std::shared_ptr<const MgHierarchy> hierarchy(const AssembledSystem& sys, const RunSpec& spec) {
  MgOptions o;
  o.pre_sweeps = spec.mg_pre;
  o.post_sweeps = spec.mg_post;
  return std::make_shared<MgHierarchy>(MgHierarchy::build(sys.a, sys.grid, o));
}

}  // namespace

PreconditionerPtr make_preconditioner(const AssembledSystem& sys, const RunSpec& spec,
                                      std::shared_ptr<const DeepOnetWeights> weights) {
  const auto& p = spec.precond;
  if (p == "none") return nullptr;
  if (is_relaxation(p)) return relaxation(sys, p, spec);
  if (p == "ilu0") return std::make_shared<Ilu0Preconditioner>(sys.a);
  if (needs_weights(spec) && !weights) throw ConfigError("--precond " + p + ": weights required");
  if (p == "deeponet") return make_no_preconditioner(weights, sys);
  if (p == "tb") {
    TbOptions o;
    o.s = spec.tb_size;
    const auto t = weights ? trunk_eval(*weights, node_coordinates(sys.grid)) : synthetic_basis(sys.grid, spec.tb_size);
    auto cs = std::make_shared<TbCoarseSpace>(build_tb(t, sys.a, o));
    return two_level_preconditioner(std::move(cs), sys.a);
  }
  if (p == "mg") return vcycle_preconditioner(hierarchy(sys, spec));
  if (p == "deeponet-mg") return hybrid_smoother_212(hierarchy(sys, spec), make_no_preconditioner(weights, sys));
  throw ConfigError("unknown preconditioner '" + p + "'");
}

SolveResult run_config(const AssembledSystem& sys, const RunSpec& spec, std::shared_ptr<const DeepOnetWeights> weights,
                       std::span<const Complex> reference) {
  auto m = make_preconditioner(sys, spec, weights);
  SolveResult res;
  if (is_relaxation(spec.solver)) {
    auto m1 = relaxation(sys, spec.solver, spec);
    if (m) {
      if (spec.nr < 1) throw ConfigError("--nr must be >= 1");
      res = hybrid_richardson(sys.a, sys.rhs, *m1, *m, spec.nr, spec.control);
    } else {
      res = richardson(sys.a, sys.rhs, *m1, spec.control);
    }
  } else if (spec.solver == "richardson") {
    const IdentityPreconditioner id;
    res = richardson(sys.a, sys.rhs, m ? *m : static_cast<const Preconditioner&>(id), spec.control);
  } else if (spec.solver == "gmres") {
    res = gmres(sys.a, sys.rhs, m.get(), spec.control);
  } else if (spec.solver == "bicgstab") {
    try {
      res = bicgstab(sys.a, sys.rhs, m.get(), spec.control);
    } catch (const KrylovBreakdown& e) {
      res.report = e.partial;
      res.report.message = e.what();
    }
  } else {
    throw ConfigError("unknown solver '" + spec.solver + "'");
  }
  if (!reference.empty() && !res.u.empty()) res.report.rel_l2_error = relative_l2(res.u, reference);
  return res;
}

}  // namespace helm
