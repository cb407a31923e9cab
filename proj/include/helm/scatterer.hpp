// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/grid.hpp>

#include <filesystem>
#include <variant>

namespace helm {

/// Axis-aligned cube (square in 2D).
struct CubeShape {
  Point center{0.5, 0.5, 0.5};
  Real side = 0.125;
};

/// Ball (disc in 2D).
struct SphereShape {
  Point center{0.5, 0.5, 0.5};
  Real radius = 0.1;
};

/// Closed triangle in the (x, y) plane, 2D only.
struct TriangleShape {
  std::array<Real, 2> v1{0.375, 0.5};
  std::array<Real, 2> v2{0.625, 0.5};
  std::array<Real, 2> v3{0.5, 0.625};
};

/// Submarine stand-in: capsule along x (cylinder plus hemispherical caps)
/// with a box-shaped sail on top. 3D only.
struct CapsuleSailShape {
  Point center{0.5, 0.5, 0.45};
  Real cylinder_length = 0.6;
  Real radius = 0.08;
  std::array<Real, 3> sail_size{0.1, 0.04, 0.08};
  /// Offset of the sail center along x from the hull center.
  Real sail_offset_x = 0.05;
};

/// Mask read from a VOXMASK1 file.
struct VoxelFileShape {
  std::filesystem::path path;
};

using Shape = std::variant<CubeShape, SphereShape, TriangleShape, CapsuleSailShape, VoxelFileShape>;

/// Stair-cased scatterer: node i is inside when its coordinates lie in the
/// closed shape. Scatterer nodes never touch the domain boundary.
class ScattererMask {
 public:
  ScattererMask() = default;
  explicit ScattererMask(std::vector<std::uint8_t> inside) : inside_(std::move(inside)) {}

  static ScattererMask empty(const StructuredGrid& g) {
    return ScattererMask(std::vector<std::uint8_t>(g.num_nodes(), 0));
  }

  Index size() const { return inside_.size(); }
  bool inside(Index node) const { return inside_[node] != 0; }
  Index count() const;
  std::span<const std::uint8_t> data() const { return inside_; }

  void merge(const ScattererMask& other);

  bool operator==(const ScattererMask& o) const { return inside_ == o.inside_; }

 private:
  std::vector<std::uint8_t> inside_;
};

/// Point-in-shape predicate for the analytic primitives (closed sets).
bool shape_contains(const Shape& s, const Point& p, int dim);

ScattererMask mask_from_shape(const StructuredGrid& g, const Shape& s);
ScattererMask mask_from_shapes(const StructuredGrid& g, std::span<const Shape> shapes);

/// VOXMASK1 file: 8-byte magic, u32-LE dims (C-order array shape, the last
/// dimension is x), then one byte (0/1) per node in row-major order, which
/// coincides with the grid's x-fastest ordering.
void write_voxel_mask(const std::filesystem::path& path, const StructuredGrid& g, const ScattererMask& mask);
ScattererMask read_voxel_mask(const std::filesystem::path& path, const StructuredGrid& g);

struct VoxelHeader {
  std::vector<std::uint32_t> dims;
};
/// Header-only parse; the dimension count is inferred from the file size.
VoxelHeader inspect_voxel_mask(const std::filesystem::path& path);

}  // namespace helm
