// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/common.hpp>

#include <array>
#include <cstdint>

namespace helm {

/// Boundary faces of [0,1]^d. Axis 0 is x (left/right); in 2D axis 1 is
/// bottom/top; in 3D axis 1 is front/back and axis 2 bottom/top. The top
/// face carries the incoming wave.
enum class Face : std::uint8_t { left, right, bottom, top, front, back };

inline constexpr std::array<Face, 6> kAllFaces{Face::left, Face::right, Face::bottom,
                                               Face::top,  Face::front, Face::back};

const char* face_name(Face f);

using Point = std::array<Real, 3>;

/// Uniform structured grid on [0,1]^dim with m nodes per axis, h = 1/(m-1),
/// lexicographic node ordering with x fastest. dim 1 is allowed for test
/// harnesses and boundary-face fields.
class StructuredGrid {
 public:
  StructuredGrid() = default;
  StructuredGrid(int dim, Index m);

  int dim() const { return dim_; }
  Index nodes_per_axis() const { return m_; }
  Real spacing() const { return h_; }
  Index num_nodes() const { return n_; }

  Index index(std::array<Index, 3> ijk) const;
  std::array<Index, 3> multi_index(Index node) const;

  /// Coordinate of grid index i along any axis: exactly i * h.
  Real coord(Index i) const { return static_cast<Real>(i) * h_; }
  Point point(Index node) const;

  bool on_boundary(Index node) const;

  /// Faces a node lies on (empty for interior nodes).
  std::vector<Face> faces(Index node) const;

  /// Axis and side of a face, or nullopt-like (-1) when the face does not
  /// exist in this dimension.
  static int face_axis(Face f, int dim);
  static bool face_is_upper(Face f);

  /// Grid of dimension dim-1 spanning the top face.
  StructuredGrid top_face_grid() const;

  /// Node index of the top-face node whose in-face coordinates are given by
  /// the top-face grid node `face_node`.
  Index top_face_node(Index face_node) const;

  bool operator==(const StructuredGrid& o) const { return dim_ == o.dim_ && m_ == o.m_; }

 private:
  int dim_ = 0;
  Index m_ = 0;
  Index n_ = 0;
  Real h_ = 0.0;
};

StructuredGrid make_grid(int dim, Index m);

/// All node coordinates as an n x dim row-major array.
RealVector node_coordinates(const StructuredGrid& g);

}  // namespace helm
