// SPDX-License-Identifier: Apache-2.0
#include <helm/multigrid.hpp>

#include <helm/transfer.hpp>

namespace helm {

namespace {

// Rows whose only nonzero is the diagonal (Dirichlet rows).
std::vector<bool> identity_rows(const ComplexCsrMatrix& a) {
  std::vector<bool> out(a.nrows());
  const auto ro = a.row_offsets();
  const auto ci = a.col_indices();
  const auto v = a.values();
  for (Index i = 0; i < a.nrows(); ++i) {
    bool only_diag = a.diag(i) != Complex{};
    for (Index p = ro[i]; p < ro[i + 1] && only_diag; ++p)
      if (ci[p] != i && v[p] != Complex{}) only_diag = false;
    out[i] = only_diag;
  }
  return out;
}

// Damped Jacobi weights omega / a_ii; Dirichlet rows are solved exactly.
ComplexVector jacobi_weights(const ComplexCsrMatrix& a, Real omega) {
  const auto dir = identity_rows(a);
  ComplexVector d(a.nrows());
  for (Index i = 0; i < a.nrows(); ++i) {
    const Complex v = a.diag(i);
    if (v == Complex{}) throw SingularMatrixError("multigrid: zero diagonal in row " + std::to_string(i));
    d[i] = (dir[i] ? 1.0 : omega) / v;
  }
  return d;
}

// Prolongation with the rows of fine Dirichlet nodes removed, so coarse
// corrections never touch them.
ComplexCsrMatrix masked_prolongation(const ComplexCsrMatrix& p, const std::vector<bool>& fine_dirichlet,
                                     const StructuredGrid& coarse, const StructuredGrid& fine) {
  std::vector<bool> coarse_dirichlet(coarse.num_nodes());
  for (Index c = 0; c < coarse.num_nodes(); ++c) {
    auto ijk = coarse.multi_index(c);
    for (int a = 0; a < coarse.dim(); ++a) ijk[static_cast<Index>(a)] *= 2;
    coarse_dirichlet[c] = fine_dirichlet[fine.index(ijk)];
  }
  std::vector<Triplet> t;
  const auto ro = p.row_offsets();
  const auto ci = p.col_indices();
  const auto v = p.values();
  for (Index i = 0; i < p.nrows(); ++i) {
    if (fine_dirichlet[i]) continue;
    for (Index k = ro[i]; k < ro[i + 1]; ++k)
      if (!coarse_dirichlet[ci[k]]) t.push_back({i, ci[k], v[k]});
  }
  return ComplexCsrMatrix::from_triplets(p.nrows(), p.ncols(), std::move(t));
}

// Coarse nodes without support become identity rows.
void pin_empty_rows(ComplexCsrMatrix& a) {
  const auto ro = a.row_offsets();
  const auto v = a.values();
  std::vector<Index> empty;
  for (Index i = 0; i < a.nrows(); ++i) {
    bool zero = true;
    for (Index k = ro[i]; k < ro[i + 1]; ++k)
      if (v[k] != Complex{}) zero = false;
    if (zero) empty.push_back(i);
  }
  auto vals = a.values_mut();
  for (Index i : empty) vals[a.diag_position(i)] = 1.0;
}

}  // namespace

MgHierarchy MgHierarchy::build(const ComplexCsrMatrix& a, const StructuredGrid& grid, const MgOptions& opt) {
  require(a.nrows() == grid.num_nodes(), "multigrid: matrix size differs from grid size");
  if (opt.omega <= 0.0 || opt.omega >= 2.0) throw ConfigError("multigrid: omega must lie in (0, 2)");
  MgHierarchy h;
  h.opt_ = opt;
  MgLevel fine;
  fine.grid = grid;
  fine.a = a;
  h.levels_.push_back(std::move(fine));

  while (opt.levels == 0 || h.levels_.size() < opt.levels) {
    const auto& cur = h.levels_.back();
    const Index m = cur.grid.nodes_per_axis();
    if (m % 2 == 0 || m < 5) {
      if (opt.levels != 0)
        throw ConfigError("multigrid: m = " + std::to_string(m) + " cannot be coarsened further (need odd m >= 5)");
      break;
    }
    MgLevel coarse;
    coarse.grid = StructuredGrid(grid.dim(), (m + 1) / 2);
    auto& fine_level = h.levels_.back();
    fine_level.p = masked_prolongation(prolongation_matrix(coarse.grid, fine_level.grid), identity_rows(fine_level.a),
                                        coarse.grid, fine_level.grid);
    fine_level.r = scaled(fine_level.p.transpose(), 1.0 / static_cast<Real>(1u << grid.dim()));
    coarse.a = multiply(fine_level.r, multiply(fine_level.a, fine_level.p));
    pin_empty_rows(coarse.a);
    h.levels_.push_back(std::move(coarse));
  }
  for (Index i = 0; i + 1 < h.levels_.size(); ++i) h.levels_[i].inv_diag = jacobi_weights(h.levels_[i].a, opt.omega);
  h.coarse_ = std::make_shared<BandLuFactorization>(BandLuFactorization::factor(h.levels_.back().a));
  return h;
}

void MgHierarchy::smooth(const MgLevel& l, std::span<const Complex> r, std::span<Complex> z, Index sweeps) const {
  ComplexVector res(r.size());
  for (Index s = 0; s < sweeps; ++s) {
    l.a.residual(r, z, res);
    for (Index i = 0; i < z.size(); ++i) z[i] += l.inv_diag[i] * res[i];
  }
}

void MgHierarchy::cycle(Index lvl, std::span<const Complex> r, std::span<Complex> z, const Preconditioner* extra) const {
  const auto& l = levels_[lvl];
  if (lvl + 1 == levels_.size()) {
    std::copy(r.begin(), r.end(), z.begin());
    coarse_->solve_in_place(z);
    return;
  }
  std::fill(z.begin(), z.end(), Complex{});
  smooth(l, r, z, opt_.pre_sweeps);
  ComplexVector res(r.size());
  if (extra) {
    l.a.residual(r, z, res);
    const auto e = extra->apply(res);
    for (Index i = 0; i < z.size(); ++i) z[i] += e[i];
  }
  l.a.residual(r, z, res);
  const auto rc = l.r.matvec(res);
  ComplexVector zc(rc.size());
  cycle(lvl + 1, rc, zc, nullptr);
  const auto corr = l.p.matvec(zc);
  for (Index i = 0; i < z.size(); ++i) z[i] += corr[i];
  smooth(l, r, z, opt_.post_sweeps);
}

void MgHierarchy::vcycle(std::span<const Complex> r, std::span<Complex> z, const Preconditioner* finest_correction) const {
  require(r.size() == levels_[0].a.nrows() && z.size() == r.size(), "multigrid: vector size mismatch");
  cycle(0, r, z, finest_correction);
}

PreconditionerPtr vcycle_preconditioner(std::shared_ptr<const MgHierarchy> h) {
  return std::make_shared<MgPreconditioner>(std::move(h));
}

PreconditionerPtr hybrid_smoother_212(std::shared_ptr<const MgHierarchy> h, PreconditionerPtr no) {
  if (!no) throw ConfigError("deeponet-mg: weights required");
  return std::make_shared<MgPreconditioner>(std::move(h), std::move(no));
}

}  // namespace helm
