// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/deeponet.hpp>
#include <helm/helmholtz.hpp>
#include <helm/preconditioner.hpp>

#include <memory>

namespace helm {

/// Neural-operator correction e = M(r) for the hybrid iteration.
///
/// apply(r): with a = ||r||_2, the branch sees (k, Re r / a, Im r / a)
/// restricted to its training grid; the trunk is evaluated once at the solver
/// nodes. The output is zeroed on Dirichlet rows and scaled back by a, so
/// M(c r) = c M(r) for c > 0. M is not linear.
class NoPreconditioner final : public Preconditioner {
 public:
  NoPreconditioner(std::shared_ptr<const DeepOnetWeights> w, const AssembledSystem& sys);

  using Preconditioner::apply;
  void apply(std::span<const Complex> r, std::span<Complex> z) const override;
  bool linear() const override { return false; }
  std::string name() const override { return "deeponet"; }

  const RealMatrix& trunk() const { return trunk_; }
  const StructuredGrid& branch_grid() const { return branch_grid_; }

 private:
  std::shared_ptr<const DeepOnetWeights> w_;
  StructuredGrid solver_grid_;
  StructuredGrid branch_grid_;
  RealVector k_branch_;
  RealMatrix trunk_;
  std::vector<Index> dirichlet_rows_;
};

PreconditionerPtr make_no_preconditioner(std::shared_ptr<const DeepOnetWeights> w, const AssembledSystem& sys);

}  // namespace helm
