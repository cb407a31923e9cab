// SPDX-License-Identifier: Apache-2.0
#include <helm/scatterer.hpp>

#include <cmath>
#include <cstring>
#include <fstream>

namespace helm {

namespace {

constexpr Real kGeomTol = 1e-12;
constexpr char kVoxelMagic[8] = {'V', 'O', 'X', 'M', 'A', 'S', 'K', '1'};

struct Box {
  Point lo{0, 0, 0};
  Point hi{0, 0, 0};
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Real edge(const std::array<Real, 2>& a, const std::array<Real, 2>& b, const Point& p) {
  return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
}

Box bounding_box(const Shape& s, int dim) {
  return std::visit(
      overloaded{
          [&](const CubeShape& c) {
            Box b;
            for (int d = 0; d < dim; ++d) {
              b.lo[d] = c.center[d] - c.side / 2;
              b.hi[d] = c.center[d] + c.side / 2;
            }
            return b;
          },
          [&](const SphereShape& c) {
            Box b;
            for (int d = 0; d < dim; ++d) {
              b.lo[d] = c.center[d] - c.radius;
              b.hi[d] = c.center[d] + c.radius;
            }
            return b;
          },
          [&](const TriangleShape& t) {
            Box b;
            for (int d = 0; d < 2; ++d) {
              b.lo[d] = std::min({t.v1[d], t.v2[d], t.v3[d]});
              b.hi[d] = std::max({t.v1[d], t.v2[d], t.v3[d]});
            }
            return b;
          },
          [&](const CapsuleSailShape& c) {
            Box b;
            b.lo = {c.center[0] - c.cylinder_length / 2 - c.radius, c.center[1] - c.radius, c.center[2] - c.radius};
            b.hi = {c.center[0] + c.cylinder_length / 2 + c.radius, c.center[1] + c.radius,
                    c.center[2] + c.radius + c.sail_size[2]};
            const Real sx = c.center[0] + c.sail_offset_x;
            b.lo[0] = std::min(b.lo[0], sx - c.sail_size[0] / 2);
            b.hi[0] = std::max(b.hi[0], sx + c.sail_size[0] / 2);
            b.lo[1] = std::min(b.lo[1], c.center[1] - c.sail_size[1] / 2);
            b.hi[1] = std::max(b.hi[1], c.center[1] + c.sail_size[1] / 2);
            return b;
          },
          [&](const VoxelFileShape&) { return Box{}; },
      },
      s);
}

void check_dimension(const Shape& s, int dim) {
  if (std::holds_alternative<TriangleShape>(s) && dim != 2)
    throw ConfigError("scatterer: triangle shape requires a 2D grid");
  if (std::holds_alternative<CapsuleSailShape>(s) && dim != 3)
    throw ConfigError("scatterer: capsule_sail shape requires a 3D grid");
}

void check_interior(const Box& b, int dim) {
  for (int d = 0; d < dim; ++d) {
    if (!(b.lo[d] > 0.0) || !(b.hi[d] < 1.0))
      throw ConfigError("scatterer: shape touches or crosses the domain boundary");
  }
}

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

Index ScattererMask::count() const {
  Index c = 0;
  for (auto v : inside_) c += v != 0;
  return c;
}

void ScattererMask::merge(const ScattererMask& other) {
  require(other.size() == size(), "mask merge: size mismatch");
  for (Index i = 0; i < inside_.size(); ++i) inside_[i] = static_cast<std::uint8_t>(inside_[i] | other.inside_[i]);
}

bool shape_contains(const Shape& s, const Point& p, int dim) {
  return std::visit(
      overloaded{
          [&](const CubeShape& c) {
            for (int d = 0; d < dim; ++d)
              if (std::abs(p[d] - c.center[d]) > c.side / 2 + kGeomTol) return false;
            return true;
          },
          [&](const SphereShape& c) {
            Real r2 = 0.0;
            for (int d = 0; d < dim; ++d) r2 += (p[d] - c.center[d]) * (p[d] - c.center[d]);
            return std::sqrt(r2) <= c.radius + kGeomTol;
          },
          [&](const TriangleShape& t) {
            Real e1 = edge(t.v1, t.v2, p), e2 = edge(t.v2, t.v3, p), e3 = edge(t.v3, t.v1, p);
            bool neg = e1 < -kGeomTol || e2 < -kGeomTol || e3 < -kGeomTol;
            bool pos = e1 > kGeomTol || e2 > kGeomTol || e3 > kGeomTol;
            return !(neg && pos);
          },
          [&](const CapsuleSailShape& c) {
            const Real half = c.cylinder_length / 2;
            const Real ax = std::clamp(p[0], c.center[0] - half, c.center[0] + half);
            const Real dx = p[0] - ax, dy = p[1] - c.center[1], dz = p[2] - c.center[2];
            if (std::sqrt(dx * dx + dy * dy + dz * dz) <= c.radius + kGeomTol) return true;
            const Real sx = c.center[0] + c.sail_offset_x;
            return std::abs(p[0] - sx) <= c.sail_size[0] / 2 + kGeomTol &&
                   std::abs(p[1] - c.center[1]) <= c.sail_size[1] / 2 + kGeomTol &&
                   p[2] >= c.center[2] - kGeomTol && p[2] <= c.center[2] + c.radius + c.sail_size[2] + kGeomTol;
          },
          [&](const VoxelFileShape&) -> bool {
            throw ConfigError("scatterer: voxel masks have no analytic point test");
          },
      },
      s);
}

ScattererMask mask_from_shape(const StructuredGrid& g, const Shape& s) {
  if (const auto* vf = std::get_if<VoxelFileShape>(&s)) return read_voxel_mask(vf->path, g);
  check_dimension(s, g.dim());
  check_interior(bounding_box(s, g.dim()), g.dim());

  std::vector<std::uint8_t> inside(g.num_nodes(), 0);
  if (const auto* cube = std::get_if<CubeShape>(&s)) {
    // Index ranges per axis; closed box.
    const Real h = g.spacing();
    std::array<Index, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int d = 0; d < g.dim(); ++d) {
      lo[d] = static_cast<Index>(std::ceil((cube->center[d] - cube->side / 2 - kGeomTol) / h));
      hi[d] = static_cast<Index>(std::floor((cube->center[d] + cube->side / 2 + kGeomTol) / h));
    }
    for (Index k = lo[2]; k <= hi[2]; ++k)
      for (Index j = lo[1]; j <= hi[1]; ++j)
        for (Index i = lo[0]; i <= hi[0]; ++i) inside[g.index({i, j, k})] = 1;
  } else {
    for (Index n = 0; n < g.num_nodes(); ++n) inside[n] = shape_contains(s, g.point(n), g.dim()) ? 1 : 0;
  }
  for (Index n = 0; n < g.num_nodes(); ++n)
    if (inside[n] && g.on_boundary(n)) throw ConfigError("scatterer: masked node on the domain boundary");
  return ScattererMask(std::move(inside));
}

ScattererMask mask_from_shapes(const StructuredGrid& g, std::span<const Shape> shapes) {
  auto mask = ScattererMask::empty(g);
  for (const auto& s : shapes) mask.merge(mask_from_shape(g, s));
  return mask;
}

void write_voxel_mask(const std::filesystem::path& path, const StructuredGrid& g, const ScattererMask& mask) {
  require(mask.size() == g.num_nodes(), "voxel mask: size does not match grid");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(kVoxelMagic, 8);
  for (int d = 0; d < g.dim(); ++d) write_u32(out, static_cast<std::uint32_t>(g.nodes_per_axis()));
  for (auto v : mask.data()) out.put(static_cast<char>(v ? 1 : 0));
  if (!out) throw FormatError("short write to " + path.string());
}

VoxelHeader inspect_voxel_mask(const std::filesystem::path& path) {
  auto bytes = slurp(path);
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kVoxelMagic, 8) != 0)
    throw FormatError("voxel mask: bad magic in " + path.string());
  for (std::size_t d = 1; d <= 3; ++d) {
    if (bytes.size() < 8 + 4 * d) break;
    VoxelHeader h;
    std::size_t count = 1;
    for (std::size_t a = 0; a < d; ++a) {
      h.dims.push_back(read_u32(bytes.data() + 8 + 4 * a));
      count *= h.dims.back();
    }
    if (8 + 4 * d + count == bytes.size()) return h;
  }
  throw FormatError("voxel mask: header dims inconsistent with file size in " + path.string());
}

ScattererMask read_voxel_mask(const std::filesystem::path& path, const StructuredGrid& g) {
  auto bytes = slurp(path);
  const auto d = static_cast<std::size_t>(g.dim());
  if (bytes.size() < 8 + 4 * d || std::memcmp(bytes.data(), kVoxelMagic, 8) != 0)
    throw FormatError("voxel mask: bad magic or truncated header in " + path.string());
  for (std::size_t a = 0; a < d; ++a) {
    auto dim = read_u32(bytes.data() + 8 + 4 * a);
    if (dim != g.nodes_per_axis())
      throw ConfigError("voxel mask: resolution " + std::to_string(dim) + " does not match grid m=" +
                        std::to_string(g.nodes_per_axis()));
  }
  if (bytes.size() != 8 + 4 * d + g.num_nodes())
    throw FormatError("voxel mask: payload size mismatch in " + path.string());
  std::vector<std::uint8_t> inside(g.num_nodes());
  for (Index n = 0; n < g.num_nodes(); ++n) {
    auto v = bytes[8 + 4 * d + n];
    if (v > 1) throw FormatError("voxel mask: byte values must be 0 or 1");
    inside[n] = v;
    if (v && g.on_boundary(n)) throw ConfigError("voxel mask: masked node on the domain boundary");
  }
  return ScattererMask(std::move(inside));
}

}  // namespace helm
