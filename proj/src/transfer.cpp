// SPDX-License-Identifier: Apache-2.0
#include <helm/transfer.hpp>

#include <cmath>

namespace helm {

namespace {

struct AxisStencil {
  Index lo;
  Real w_hi;  // weight of node lo+1; lo gets 1 - w_hi
};

// Locate x in a uniform axis with m nodes.
AxisStencil locate(Real x, Index m) {
  const Real t = x * static_cast<Real>(m - 1);
  Real fl = std::floor(t);
  // Snap near-integers so coincident nodes interpolate exactly.
  if (std::abs(t - std::round(t)) < 1e-10) fl = std::round(t);
  auto lo = static_cast<Index>(std::max(0.0, fl));
  if (lo >= m - 1) return {m - 2, 1.0};
  Real w = t - static_cast<Real>(lo);
  if (std::abs(w) < 1e-10) w = 0.0;
  return {lo, w};
}

// Visits the 2^d interpolation contributions of target node `node`.
template <typename F>
void for_each_weight(const StructuredGrid& from, const StructuredGrid& to, Index node, F&& f) {
  if (from.dim() != to.dim()) throw DimensionError("transfer: grid dimensions differ");
  const int d = to.dim();
  auto p = to.point(node);
  std::array<AxisStencil, 3> st{};
  for (int a = 0; a < d; ++a) st[a] = locate(p[a], from.nodes_per_axis());
  const unsigned corners = 1u << d;
  for (unsigned c = 0; c < corners; ++c) {
    Real w = 1.0;
    std::array<Index, 3> ijk{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      bool hi = (c >> a) & 1u;
      w *= hi ? st[a].w_hi : 1.0 - st[a].w_hi;
      ijk[a] = st[a].lo + (hi ? 1 : 0);
    }
    if (w != 0.0) f(from.index(ijk), w);
  }
}

}  // namespace

template <typename T>
std::vector<T> interpolate_field(std::span<const T> field, const StructuredGrid& from, const StructuredGrid& to) {
  require(field.size() == from.num_nodes(), "interpolate_field: field size does not match source grid");
  std::vector<T> out(to.num_nodes());
  for (Index n = 0; n < to.num_nodes(); ++n) {
    T s{};
    for_each_weight(from, to, n, [&](Index src, Real w) { s += w * field[src]; });
    out[n] = s;
  }
  return out;
}

template <typename T>
std::vector<T> restrict_field(std::span<const T> fine, const StructuredGrid& fine_grid,
                              const StructuredGrid& coarse_grid) {
  require(fine.size() == fine_grid.num_nodes(), "restrict_field: field size does not match fine grid");
  if (!nested(fine_grid, coarse_grid)) return interpolate_field(fine, fine_grid, coarse_grid);
  std::vector<T> out(coarse_grid.num_nodes());
  for (Index n = 0; n < coarse_grid.num_nodes(); ++n) {
    auto ijk = coarse_grid.multi_index(n);
    for (auto& i : ijk) i *= 2;
    out[n] = fine[fine_grid.index(ijk)];
  }
  return out;
}

template <typename T>
std::vector<T> prolong_field(std::span<const T> coarse, const StructuredGrid& coarse_grid,
                             const StructuredGrid& fine_grid) {
  return interpolate_field(coarse, coarse_grid, fine_grid);
}

template std::vector<Real> interpolate_field<Real>(std::span<const Real>, const StructuredGrid&, const StructuredGrid&);
template std::vector<Complex> interpolate_field<Complex>(std::span<const Complex>, const StructuredGrid&,
                                                         const StructuredGrid&);
template std::vector<Real> restrict_field<Real>(std::span<const Real>, const StructuredGrid&, const StructuredGrid&);
template std::vector<Complex> restrict_field<Complex>(std::span<const Complex>, const StructuredGrid&,
                                                      const StructuredGrid&);
template std::vector<Real> prolong_field<Real>(std::span<const Real>, const StructuredGrid&, const StructuredGrid&);
template std::vector<Complex> prolong_field<Complex>(std::span<const Complex>, const StructuredGrid&,
                                                     const StructuredGrid&);

ComplexCsrMatrix prolongation_matrix(const StructuredGrid& coarse, const StructuredGrid& fine) {
  std::vector<Triplet> t;
  t.reserve(fine.num_nodes() * (1u << fine.dim()));
  for (Index n = 0; n < fine.num_nodes(); ++n)
    for_each_weight(coarse, fine, n, [&](Index src, Real w) { t.push_back({n, src, Complex{w, 0.0}}); });
  return ComplexCsrMatrix::from_triplets(fine.num_nodes(), coarse.num_nodes(), std::move(t));
}

ComplexCsrMatrix full_weighting_matrix(const StructuredGrid& coarse, const StructuredGrid& fine) {
  if (!nested(fine, coarse)) throw DimensionError("full weighting: grids are not nested");
  const Real scale = 1.0 / static_cast<Real>(1u << fine.dim());
  return scaled(prolongation_matrix(coarse, fine).transpose(), Complex{scale, 0.0});
}

}  // namespace helm
