// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/deeponet.hpp>
#include <helm/helmholtz.hpp>
#include <helm/multigrid.hpp>
#include <helm/solvers.hpp>
#include <helm/tb_precond.hpp>

#include <memory>
#include <optional>

namespace helm {

/// One solver/preconditioner configuration.
///
/// solver: jacobi | gs | sor | ssor | richardson | gmres | bicgstab
///   A relaxation solver runs Richardson with that relaxation as M1. With a
///   preconditioner other than "none" it becomes the hybrid iteration with
///   n_r relaxation steps per application of the preconditioner (M2).
///   richardson uses the preconditioner as M directly.
/// precond: none | jacobi | gs | sor | ssor | ilu0 | tb | deeponet | mg | deeponet-mg
struct RunSpec {
  std::string solver = "gmres";
  std::string precond = "none";
  Index tb_size = 32;
  Index nr = 1;
  std::optional<Real> omega;
  Index mg_pre = 2;
  Index mg_post = 2;
  SolveControl control;
};

/// Default relaxation factor for a relaxation name (1 for jacobi/gs,
/// 1.5 for sor/ssor).
Real default_omega(const std::string& relaxation);
bool is_relaxation(const std::string& name);
RelaxationKind relaxation_kind(const std::string& name);

/// Builds the named preconditioner for `sys`. Neural-operator variants need
/// weights; "tb" falls back to a synthetic sine basis without them.
PreconditionerPtr make_preconditioner(const AssembledSystem& sys, const RunSpec& spec,
                                      std::shared_ptr<const DeepOnetWeights> weights);

/// Runs one configuration; rel_l2_error is filled when `reference` is given.
SolveResult run_config(const AssembledSystem& sys, const RunSpec& spec, std::shared_ptr<const DeepOnetWeights> weights,
                       std::span<const Complex> reference = {});

/// Whether a configuration needs trained weights.
bool needs_weights(const RunSpec& spec);

}  // namespace helm
