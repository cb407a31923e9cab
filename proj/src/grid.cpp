// SPDX-License-Identifier: Apache-2.0
#include <helm/grid.hpp>

#include <string>

namespace helm {

const char* face_name(Face f) {
  switch (f) {
    case Face::left: return "left";
    case Face::right: return "right";
    case Face::bottom: return "bottom";
    case Face::top: return "top";
    case Face::front: return "front";
    case Face::back: return "back";
  }
  return "?";
}

StructuredGrid::StructuredGrid(int dim, Index m) : dim_(dim), m_(m) {
  if (dim < 1 || dim > 3) throw DimensionError("grid: dim must be 1, 2 or 3");
  if (m < 3) throw DimensionError("grid: need at least 3 nodes per axis, got " + std::to_string(m));
  n_ = 1;
  for (int d = 0; d < dim; ++d) n_ *= m;
  h_ = 1.0 / static_cast<Real>(m - 1);
}

StructuredGrid make_grid(int dim, Index m) { return StructuredGrid(dim, m); }

Index StructuredGrid::index(std::array<Index, 3> ijk) const {
  Index idx = 0;
  for (int d = dim_; d-- > 0;) idx = idx * m_ + ijk[static_cast<Index>(d)];
  return idx;
}

std::array<Index, 3> StructuredGrid::multi_index(Index node) const {
  std::array<Index, 3> ijk{0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    ijk[static_cast<Index>(d)] = node % m_;
    node /= m_;
  }
  return ijk;
}

Point StructuredGrid::point(Index node) const {
  auto ijk = multi_index(node);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) p[static_cast<Index>(d)] = coord(ijk[static_cast<Index>(d)]);
  return p;
}

bool StructuredGrid::on_boundary(Index node) const {
  auto ijk = multi_index(node);
  for (int d = 0; d < dim_; ++d) {
    auto i = ijk[static_cast<Index>(d)];
    if (i == 0 || i == m_ - 1) return true;
  }
  return false;
}

int StructuredGrid::face_axis(Face f, int dim) {
  switch (f) {
    case Face::left:
    case Face::right: return 0;
    case Face::bottom:
    case Face::top: return dim >= 2 ? dim - 1 : -1;
    case Face::front:
    case Face::back: return dim == 3 ? 1 : -1;
  }
  return -1;
}

bool StructuredGrid::face_is_upper(Face f) { return f == Face::right || f == Face::top || f == Face::back; }

std::vector<Face> StructuredGrid::faces(Index node) const {
  std::vector<Face> out;
  auto ijk = multi_index(node);
  for (Face f : kAllFaces) {
    int ax = face_axis(f, dim_);
    if (ax < 0) continue;
    Index want = face_is_upper(f) ? m_ - 1 : 0;
    if (ijk[static_cast<Index>(ax)] == want) out.push_back(f);
  }
  return out;
}

StructuredGrid StructuredGrid::top_face_grid() const {
  if (dim_ < 2) throw DimensionError("grid: top face needs dim >= 2");
  return StructuredGrid(dim_ - 1, m_);
}

Index StructuredGrid::top_face_node(Index face_node) const {
  auto face = top_face_grid();
  auto ij = face.multi_index(face_node);
  std::array<Index, 3> ijk{ij[0], ij[1], 0};
  ijk[static_cast<Index>(dim_ - 1)] = m_ - 1;
  return index(ijk);
}

RealVector node_coordinates(const StructuredGrid& g) {
  const auto d = static_cast<Index>(g.dim());
  RealVector xs(g.num_nodes() * d);
  for (Index n = 0; n < g.num_nodes(); ++n) {
    auto p = g.point(n);
    for (Index a = 0; a < d; ++a) xs[n * d + a] = p[a];
  }
  return xs;
}

}  // namespace helm
