// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/band_lu.hpp>
#include <helm/grid.hpp>
#include <helm/preconditioner.hpp>

#include <memory>
#include <optional>

namespace helm {

struct MgOptions {
  /// Number of levels including the finest; 0 coarsens down to m = 3.
  Index levels = 0;
  Real omega = 2.0 / 3.0;  // damped Jacobi
  Index pre_sweeps = 2;
  Index post_sweeps = 2;
};

struct MgLevel {
  StructuredGrid grid;
  ComplexCsrMatrix a;
  ComplexVector inv_diag;
  ComplexCsrMatrix p;  // prolongation from the next coarser level
  ComplexCsrMatrix r;  // full-weighting restriction to the next coarser level
};

/// Geometric hierarchy on nested grids m_{i+1} = (m_i + 1) / 2 with
/// Galerkin coarse operators A_{i+1} = R_i A_i P_i and a band LU solve on
/// the coarsest level.
class MgHierarchy {
 public:
  static MgHierarchy build(const ComplexCsrMatrix& a, const StructuredGrid& grid, const MgOptions& opt = {});

  Index num_levels() const { return levels_.size(); }
  const MgLevel& level(Index i) const { return levels_[i]; }
  const MgOptions& options() const { return opt_; }

  /// One V(pre, post) cycle for A z = r from z = 0. When `finest_correction`
  /// is given, the finest level runs pre-smoothing, one correction
  /// z += N(r - A z), the coarse-grid correction and post-smoothing.
  void vcycle(std::span<const Complex> r, std::span<Complex> z, const Preconditioner* finest_correction = nullptr) const;

 private:
  void cycle(Index lvl, std::span<const Complex> r, std::span<Complex> z, const Preconditioner* extra) const;
  void smooth(const MgLevel& l, std::span<const Complex> r, std::span<Complex> z, Index sweeps) const;

  std::vector<MgLevel> levels_;
  std::shared_ptr<const BandLuFactorization> coarse_;
  MgOptions opt_;
};

/// V-cycle as a preconditioner. With a finest-level neural-operator
/// correction (2-1-2 schedule) the operator is nonlinear and may only be
/// used by Richardson drivers or flexible GMRES.
class MgPreconditioner final : public Preconditioner {
 public:
  explicit MgPreconditioner(std::shared_ptr<const MgHierarchy> h, PreconditionerPtr finest_correction = nullptr)
      : h_(std::move(h)), extra_(std::move(finest_correction)) {}

  using Preconditioner::apply;
  void apply(std::span<const Complex> r, std::span<Complex> z) const override { h_->vcycle(r, z, extra_.get()); }
  bool linear() const override { return !extra_ || extra_->linear(); }
  std::string name() const override { return extra_ ? "deeponet-mg" : "mg"; }

 private:
  std::shared_ptr<const MgHierarchy> h_;
  PreconditionerPtr extra_;
};

PreconditionerPtr vcycle_preconditioner(std::shared_ptr<const MgHierarchy> h);
PreconditionerPtr hybrid_smoother_212(std::shared_ptr<const MgHierarchy> h, PreconditionerPtr no);

}  // namespace helm
