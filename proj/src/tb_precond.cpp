// SPDX-License-Identifier: Apache-2.0
#include <helm/tb_precond.hpp>

#include <numbers>
#include <random>

namespace helm {

std::vector<Index> select_columns(Index p, const TbOptions& opt) {
  if (opt.s < 1 || opt.s > p)
    throw ConfigError("tb: coarse size " + std::to_string(opt.s) + " outside [1, " + std::to_string(p) + "]");
  std::vector<Index> cols;
  switch (opt.selection) {
    case TbSelection::natural:
      for (Index j = 0; j < opt.s; ++j) cols.push_back(j);
      break;
    case TbSelection::random: {
      std::vector<Index> all(p);
      for (Index j = 0; j < p; ++j) all[j] = j;
      std::mt19937_64 rng(opt.seed);
      // Partial Fisher-Yates; kept sorted so the basis order is stable.
      for (Index j = 0; j < opt.s; ++j) {
        std::uniform_int_distribution<Index> pick(j, p - 1);
        std::swap(all[j], all[pick(rng)]);
      }
      cols.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(opt.s));
      std::sort(cols.begin(), cols.end());
      break;
    }
    case TbSelection::custom:
      cols = opt.columns;
      if (cols.size() != opt.s) throw ConfigError("tb: custom selection size differs from s");
      for (auto c : cols)
        if (c >= p) throw ConfigError("tb: custom column " + std::to_string(c) + " out of range");
      break;
  }
  return cols;
}

TbCoarseSpace build_tb(const RealMatrix& t, const ComplexCsrMatrix& a, const TbOptions& opt) {
  const Index n = t.rows;
  require(a.nrows() == n && a.ncols() == n, "tb: basis rows differ from system size");
  TbCoarseSpace cs;
  cs.selection = select_columns(t.cols, opt);
  const Index s = cs.selection.size();
  if (s > n) throw ConfigError("tb: more columns than nodes");

  RealMatrix p(n, s);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < s; ++j) p(i, j) = t(i, cs.selection[j]);
  auto qr = thin_qr(p);
  cs.q = std::move(qr.q);

  // A_c = Q^T (A Q), one sparse matvec per column.
  cs.ac = ComplexMatrix(s, s);
  ComplexVector col(n), aq(n);
  for (Index j = 0; j < s; ++j) {
    for (Index i = 0; i < n; ++i) col[i] = cs.q(i, j);
    a.matvec(col, aq);
    for (Index i = 0; i < s; ++i) {
      Complex acc{};
      for (Index r = 0; r < n; ++r) acc += cs.q(r, i) * aq[r];
      cs.ac(i, j) = acc;
    }
  }
  cs.lu = DenseLu::factor(cs.ac, opt.coarse_dim_cap);
  return cs;
}

TbCoarseSpace build_tb(const DeepOnetWeights& w, const AssembledSystem& sys, const TbOptions& opt) {
  if (w.meta.dim != sys.grid.dim()) throw ConfigError("tb: weights dimension differs from problem dimension");
  return build_tb(trunk_eval(w, node_coordinates(sys.grid)), sys.a, opt);
}

void coarse_apply(const TbCoarseSpace& cs, std::span<const Complex> r, std::span<Complex> z) {
  const Index n = cs.q.rows, s = cs.q.cols;
  require(r.size() == n && z.size() == n, "tb: coarse_apply size mismatch");
  ComplexVector y(s);
  for (Index i = 0; i < n; ++i) {
    const Real* row = cs.q.data.data() + i * s;
    for (Index j = 0; j < s; ++j) y[j] += row[j] * r[i];
  }
  cs.lu.solve_in_place(y);
  for (Index i = 0; i < n; ++i) {
    const Real* row = cs.q.data.data() + i * s;
    Complex acc{};
    for (Index j = 0; j < s; ++j) acc += row[j] * y[j];
    z[i] = acc;
  }
}

ComplexVector coarse_apply(const TbCoarseSpace& cs, std::span<const Complex> r) {
  ComplexVector z(r.size());
  coarse_apply(cs, r, z);
  return z;
}

TwoLevelPreconditioner::TwoLevelPreconditioner(std::shared_ptr<const TbCoarseSpace> cs, const ComplexCsrMatrix& a,
                                               PreconditionerPtr smoother, TwoLevelMode mode)
    : cs_(std::move(cs)), a_(&a), smoother_(std::move(smoother)), mode_(mode) {
  if (smoother_ && !smoother_->linear()) throw ConfigError("tb: smoother must be linear");
}

void TwoLevelPreconditioner::apply(std::span<const Complex> r, std::span<Complex> z) const {
  if (!smoother_) {
    coarse_apply(*cs_, r, z);
    return;
  }
  const Index n = r.size();
  ComplexVector tmp(n), res(n);
  smoother_->apply(r, z);
  if (mode_ == TwoLevelMode::additive) {
    coarse_apply(*cs_, r, tmp);
    for (Index i = 0; i < n; ++i) z[i] += tmp[i];
    return;
  }
  a_->residual(r, z, res);
  coarse_apply(*cs_, res, tmp);
  for (Index i = 0; i < n; ++i) z[i] += tmp[i];
  a_->residual(r, z, res);
  smoother_->apply(res, tmp);
  for (Index i = 0; i < n; ++i) z[i] += tmp[i];
}

PreconditionerPtr make_smoother(const ComplexCsrMatrix& a, const TbSmootherSpec& spec) {
  switch (spec.kind) {
    case TbSmootherSpec::Kind::none:
      return nullptr;
    case TbSmootherSpec::Kind::ilu0:
      return std::make_shared<Ilu0Preconditioner>(a);
    case TbSmootherSpec::Kind::relaxation:
      break;
  }
  return std::make_shared<RelaxationPreconditioner>(a, spec.relaxation);
}

PreconditionerPtr two_level_preconditioner(std::shared_ptr<const TbCoarseSpace> cs, const ComplexCsrMatrix& a,
                                           const TbSmootherSpec& smoother, TwoLevelMode mode) {
  return std::make_shared<TwoLevelPreconditioner>(std::move(cs), a, make_smoother(a, smoother), mode);
}

RealMatrix synthetic_basis(const StructuredGrid& g, Index count, SyntheticBasis kind) {
  const int d = g.dim();
  const Index m = g.nodes_per_axis();
  // Enumerate multi-indices with entries < m, ordered by |j|² then lexicographically.
  std::vector<std::array<Index, 3>> modes;
  const Index side = std::min<Index>(m, count + 1);
  for (Index a = 0; a < side; ++a)
    for (Index b = 0; b < (d >= 2 ? side : 1); ++b)
      for (Index c = 0; c < (d >= 3 ? side : 1); ++c) modes.push_back({a, b, c});
  std::stable_sort(modes.begin(), modes.end(), [](const auto& x, const auto& y) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  });
  if (modes.size() < count) throw ConfigError("synthetic basis: grid too small for the requested mode count");
  modes.resize(count);

  const Real pi = std::numbers::pi;
  auto phi = [&](Index j, Real x) {
    return kind == SyntheticBasis::sine ? std::sin(static_cast<Real>(j + 1) * pi * x)
                                        : std::cos(static_cast<Real>(j) * pi * x);
  };
  RealMatrix t(g.num_nodes(), count);
  for (Index node = 0; node < g.num_nodes(); ++node) {
    const auto ijk = g.multi_index(node);
    for (Index c = 0; c < count; ++c) {
      Real v = 1.0;
      for (int ax = 0; ax < d; ++ax) v *= phi(modes[c][ax], g.coord(ijk[ax]));
      t(node, c) = v;
    }
  }
  return t;
}

TensorContainer tb_to_container(const TbCoarseSpace& cs) {
  TensorContainer c;
  const Index n = cs.q.rows, s = cs.q.cols;
  c.tensors["Q"] = Tensor::from_f64({n, s}, cs.q.data);
  RealVector re(s * s), im(s * s), sel(cs.selection.begin(), cs.selection.end());
  for (Index i = 0; i < s * s; ++i) {
    re[i] = cs.ac.data[i].real();
    im[i] = cs.ac.data[i].imag();
  }
  c.tensors["A_c_re"] = Tensor::from_f64({s, s}, re);
  c.tensors["A_c_im"] = Tensor::from_f64({s, s}, im);
  c.tensors["selection"] = Tensor::from_f64({s}, sel);
  c.meta = {{"kind", "tb_coarse_space"}, {"n", n}, {"s", s}};
  return c;
}

}  // namespace helm
