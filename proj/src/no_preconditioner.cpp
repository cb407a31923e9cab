// SPDX-License-Identifier: Apache-2.0
#include <helm/no_preconditioner.hpp>

#include <helm/transfer.hpp>

namespace helm {

NoPreconditioner::NoPreconditioner(std::shared_ptr<const DeepOnetWeights> w, const AssembledSystem& sys)
    : w_(std::move(w)), solver_grid_(sys.grid), dirichlet_rows_(sys.dirichlet_rows) {
  if (!w_) throw ConfigError("deeponet preconditioner: weights required");
  if (w_->meta.dim != sys.grid.dim())
    throw ConfigError("deeponet preconditioner: weights are " + std::to_string(w_->meta.dim) + "D but the problem is " +
                      std::to_string(sys.grid.dim()) + "D");
  require(sys.k.size() == sys.size(), "deeponet preconditioner: system carries no wave-number field");
  branch_grid_ = StructuredGrid(sys.grid.dim(), w_->meta.m_b);
  k_branch_ = restrict_field<Real>(sys.k, solver_grid_, branch_grid_);
  trunk_ = trunk_eval(*w_, node_coordinates(solver_grid_));
}

void NoPreconditioner::apply(std::span<const Complex> r, std::span<Complex> z) const {
  require(r.size() == solver_grid_.num_nodes() && z.size() == r.size(), "deeponet preconditioner: size mismatch");
  const Real alpha = norm2(r);
  if (alpha == 0.0) {
    std::fill(z.begin(), z.end(), Complex{});
    return;
  }
  RealVector re(r.size()), im(r.size());
  for (Index i = 0; i < r.size(); ++i) {
    re[i] = r[i].real() / alpha;
    im[i] = r[i].imag() / alpha;
  }
  const auto re_b = restrict_field<Real>(re, solver_grid_, branch_grid_);
  const auto im_b = restrict_field<Real>(im, solver_grid_, branch_grid_);
  const auto b = branch_forward(*w_, BranchInput{k_branch_, re_b, im_b});
  const auto e = combine_trunk_branch(trunk_, b);
  for (Index i = 0; i < z.size(); ++i) z[i] = alpha * e[i];
  for (Index row : dirichlet_rows_) z[row] = Complex{};
}

PreconditionerPtr make_no_preconditioner(std::shared_ptr<const DeepOnetWeights> w, const AssembledSystem& sys) {
  return std::make_shared<NoPreconditioner>(std::move(w), sys);
}

}  // namespace helm
