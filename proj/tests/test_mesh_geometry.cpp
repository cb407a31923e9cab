// SPDX-License-Identifier: Apache-2.0
#include <helm/grid.hpp>
#include <helm/scatterer.hpp>
#include <helm/transfer.hpp>

#include <doctest.h>

#include <fstream>

#include "test_util.hpp"

using namespace helm;
using namespace testutil;

TEST_CASE("make_grid") {
  auto g3 = make_grid(3, 3);
  CHECK(g3.spacing() == 0.5);
  CHECK(g3.num_nodes() == 27);
  const auto c = g3.point(13);
  CHECK(c == Point{0.5, 0.5, 0.5});

  auto g2 = make_grid(2, 33);
  CHECK(g2.spacing() == 1.0 / 32.0);
  CHECK(g2.num_nodes() == 1089);
  CHECK(g2.point(0) == Point{0.0, 0.0, 0.0});

  CHECK_THROWS_AS(make_grid(2, 2), DimensionError);

  // x fastest, coordinates exactly i * h
  CHECK(g2.multi_index(34) == std::array<Index, 3>{1, 1, 0});
  CHECK(g2.point(34)[0] == 1.0 / 32.0);
}

TEST_CASE("boundary classification") {
  auto g = make_grid(3, 5);
  for (Index n = 0; n < g.num_nodes(); ++n) {
    const auto ijk = g.multi_index(n);
    bool boundary = false;
    for (int a = 0; a < 3; ++a) boundary |= ijk[a] == 0 || ijk[a] == 4;
    CHECK(g.on_boundary(n) == boundary);
    CHECK(g.faces(n).empty() == !boundary);
  }
  // corner (0,0,4): left, front, top
  auto f = g.faces(g.index({0, 0, 4}));
  CHECK(f.size() == 3);
  CHECK(std::find(f.begin(), f.end(), Face::top) != f.end());
  CHECK(std::find(f.begin(), f.end(), Face::left) != f.end());
  CHECK(std::find(f.begin(), f.end(), Face::front) != f.end());

  auto g2 = make_grid(2, 5);
  auto f2 = g2.faces(g2.index({2, 4, 0}));
  CHECK(f2 == std::vector<Face>{Face::top});
  CHECK(g2.top_face_node(3) == g2.index({3, 4, 0}));
}

TEST_CASE("cube mask on m=33") {
  auto g = make_grid(3, 33);
  auto mask = mask_from_shape(g, CubeShape{{0.5, 0.5, 0.5}, 0.125});
  CHECK(mask.count() == 125);
  // Brute-force point-in-box oracle.
  for (Index n = 0; n < g.num_nodes(); ++n) {
    const auto ijk = g.multi_index(n);
    bool in = true;
    for (int a = 0; a < 3; ++a) in &= ijk[a] >= 14 && ijk[a] <= 18;
    if (mask.inside(n) != in) {
      FAIL("cube mask differs from index-range oracle at node " << n);
    }
  }
}

TEST_CASE("empty shape list gives an all-false mask") {
  auto g = make_grid(2, 9);
  auto mask = mask_from_shapes(g, {});
  CHECK(mask.size() == g.num_nodes());
  CHECK(mask.count() == 0);
}

TEST_CASE("triangle mask matches a barycentric oracle") {
  auto g = make_grid(2, 33);
  TriangleShape t;
  auto mask = mask_from_shape(g, t);
  CHECK(mask.count() > 0);
  const Real ax = t.v1[0], ay = t.v1[1], bx = t.v2[0], by = t.v2[1], cx = t.v3[0], cy = t.v3[1];
  const Real det = (by - cy) * (ax - cx) + (cx - bx) * (ay - cy);
  for (Index n = 0; n < g.num_nodes(); ++n) {
    const auto p = g.point(n);
    const Real l1 = ((by - cy) * (p[0] - cx) + (cx - bx) * (p[1] - cy)) / det;
    const Real l2 = ((cy - ay) * (p[0] - cx) + (ax - cx) * (p[1] - cy)) / det;
    const Real l3 = 1.0 - l1 - l2;
    const bool in = l1 >= -1e-12 && l2 >= -1e-12 && l3 >= -1e-12;
    if (mask.inside(n) != in) FAIL("triangle mask differs from oracle at node " << n);
  }
}

TEST_CASE("sphere and capsule masks match brute-force predicates") {
  auto g = make_grid(3, 17);
  SphereShape s{{0.5, 0.5, 0.5}, 0.2};
  auto ms = mask_from_shape(g, s);
  for (Index n = 0; n < g.num_nodes(); ++n) {
    const auto p = g.point(n);
    const Real r2 = (p[0] - 0.5) * (p[0] - 0.5) + (p[1] - 0.5) * (p[1] - 0.5) + (p[2] - 0.5) * (p[2] - 0.5);
    CHECK(ms.inside(n) == (r2 <= 0.04 + 1e-12));
  }
  CapsuleSailShape c;
  auto mc = mask_from_shape(g, c);
  CHECK(mc.count() > 0);
  for (Index n = 0; n < g.num_nodes(); ++n) {
    const auto p = g.point(n);
    // capsule: distance to the axis segment <= radius
    const Real half = c.cylinder_length / 2.0;
    const Real dx = std::clamp(p[0] - c.center[0], -half, half);
    const Real qx = p[0] - (c.center[0] + dx), qy = p[1] - c.center[1], qz = p[2] - c.center[2];
    bool in = qx * qx + qy * qy + qz * qz <= c.radius * c.radius + 1e-12;
    // sail box on top of the hull
    const Real sx = c.center[0] + c.sail_offset_x;
    in |= std::abs(p[0] - sx) <= c.sail_size[0] / 2 + 1e-12 && std::abs(p[1] - c.center[1]) <= c.sail_size[1] / 2 + 1e-12 &&
          p[2] >= c.center[2] - 1e-12 && p[2] <= c.center[2] + c.radius + c.sail_size[2] + 1e-12;
    if (mc.inside(n) != in) FAIL("capsule_sail mask differs from oracle at node " << n);
  }
}

TEST_CASE("shapes touching the boundary are rejected") {
  auto g = make_grid(2, 17);
  CHECK_THROWS_AS(mask_from_shape(g, CubeShape{{0.1, 0.5, 0.5}, 0.3}), ConfigError);
  CHECK_THROWS_AS(mask_from_shape(g, CapsuleSailShape{}), ConfigError);
}

TEST_CASE("voxel mask round trip and errors") {
  auto dir = tmp_dir();
  auto g = make_grid(3, 9);
  auto mask = mask_from_shape(g, SphereShape{{0.5, 0.5, 0.5}, 0.25});
  const auto path = dir / "sphere.vox";
  write_voxel_mask(path, g, mask);
  CHECK(read_voxel_mask(path, g) == mask);
  auto hdr = inspect_voxel_mask(path);
  CHECK(hdr.dims == std::vector<std::uint32_t>{9, 9, 9});
  CHECK(mask_from_shape(g, VoxelFileShape{path}) == mask);

  // bitwise identical rewrite
  write_voxel_mask(dir / "copy.vox", g, read_voxel_mask(path, g));
  std::ifstream a(path, std::ios::binary), b(dir / "copy.vox", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);

  CHECK_THROWS_AS(read_voxel_mask(path, make_grid(3, 17)), ConfigError);
  {
    std::ofstream bad(dir / "bad.vox", std::ios::binary);
    bad << "VOXMASKX";
  }
  CHECK_THROWS_AS(read_voxel_mask(dir / "bad.vox", g), FormatError);
}

TEST_CASE("restriction and prolongation") {
  auto fine = make_grid(2, 33), coarse = make_grid(2, 17);
  RealVector fx(fine.num_nodes());
  for (Index n = 0; n < fine.num_nodes(); ++n) fx[n] = fine.point(n)[0];
  auto cx = restrict_field<Real>(fx, fine, coarse);
  for (Index n = 0; n < coarse.num_nodes(); ++n) CHECK(cx[n] == coarse.point(n)[0]);

  RealVector cst(fine.num_nodes(), 3.25);
  for (auto v : restrict_field<Real>(cst, fine, coarse)) CHECK(v == doctest::Approx(3.25).epsilon(1e-15));

  // non-nested: m=41 -> m=17
  auto f41 = make_grid(3, 41), c17 = make_grid(3, 17);
  RealVector lin(f41.num_nodes());
  for (Index n = 0; n < f41.num_nodes(); ++n) {
    auto p = f41.point(n);
    lin[n] = 2.0 * p[0] - p[1] + 0.5 * p[2];
  }
  auto lc = restrict_field<Real>(lin, f41, c17);
  Real worst = 0.0;
  for (Index n = 0; n < c17.num_nodes(); ++n) {
    auto p = c17.point(n);
    worst = std::max(worst, std::abs(lc[n] - (2.0 * p[0] - p[1] + 0.5 * p[2])));
  }
  CHECK(worst <= 1e-13);

  // prolongation: x + y from m=5 to m=9 is exact
  auto g5 = make_grid(2, 5), g9 = make_grid(2, 9);
  RealVector c5(g5.num_nodes());
  for (Index n = 0; n < g5.num_nodes(); ++n) c5[n] = g5.point(n)[0] + g5.point(n)[1];
  auto p9 = prolong_field<Real>(c5, g5, g9);
  for (Index n = 0; n < g9.num_nodes(); ++n) CHECK(std::abs(p9[n] - (g9.point(n)[0] + g9.point(n)[1])) <= 1e-15);

  // bilinear xy also reproduced
  for (Index n = 0; n < g5.num_nodes(); ++n) c5[n] = g5.point(n)[0] * g5.point(n)[1];
  p9 = prolong_field<Real>(c5, g5, g9);
  for (Index n = 0; n < g9.num_nodes(); ++n) CHECK(std::abs(p9[n] - g9.point(n)[0] * g9.point(n)[1]) <= 1e-15);

  // restrict(prolong(c)) = c on nested grids
  auto rc = random_vector(g5.num_nodes(), 31);
  auto back = restrict_field<Complex>(prolong_field<Complex>(rc, g5, g9), g9, g5);
  CHECK(max_abs_diff(back, rc) == 0.0);
}

TEST_CASE("full weighting equals (1/2^d) P^T") {
  for (int d : {1, 2, 3}) {
    auto coarse = make_grid(d, 5), fine = make_grid(d, 9);
    auto p = prolongation_matrix(coarse, fine);
    auto r = full_weighting_matrix(coarse, fine);
    const Real w = 1.0 / static_cast<Real>(1 << d);
    for (Index i = 0; i < coarse.num_nodes(); ++i)
      for (Index j = 0; j < fine.num_nodes(); ++j) CHECK(r.at(i, j) == w * p.at(j, i));
    // P applied to a coarse field equals prolong_field
    auto c = random_vector(coarse.num_nodes(), 40 + d);
    CHECK(max_abs_diff(p.matvec(c), prolong_field<Complex>(c, coarse, fine)) <= 1e-15);
  }
}
