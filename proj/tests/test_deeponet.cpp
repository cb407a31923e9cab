// SPDX-License-Identifier: Apache-2.0
#include <helm/deeponet.hpp>
#include <helm/helmholtz.hpp>
#include <helm/no_preconditioner.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"

using namespace helm;
using namespace testutil;

namespace {

DeepOnetMeta tiny_meta() {
  DeepOnetMeta m;
  m.dim = 2;
  m.m_b = 9;
  m.p = 3;
  m.channels = {3, 2, 3};
  m.padding = {Padding::same, Padding::valid};
  // 9 -> 5 -> 2, flatten 3 * 2 * 2
  m.branch_widths = {12, 4, 6};
  m.trunk_widths = {2, 5, 3};
  return m;
}

RealVector random_field(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  RealVector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Straightforward 2D conv on an explicitly zero-padded copy.
RealVector naive_conv2d(const ConvLayer& l, const RealVector& x, Index s, Index& so_out) {
  const Index k = 3, st = 2;
  Index so = 0, pad = 0;
  if (l.padding == Padding::valid) {
    so = (s - k) / st + 1;
  } else {
    so = (s + st - 1) / st;
    const Index total = std::max<Index>((so - 1) * st + k, s) - s;
    pad = total / 2;
  }
  const Index sp = s + 2 * k;  // generous padded buffer
  RealVector padded(l.in * sp * sp, 0.0);
  for (Index c = 0; c < l.in; ++c)
    for (Index y = 0; y < s; ++y)
      for (Index xx = 0; xx < s; ++xx) padded[(c * sp + y + pad) * sp + xx + pad] = x[(c * s + y) * s + xx];
  RealVector out(l.out * so * so);
  for (Index o = 0; o < l.out; ++o)
    for (Index oy = 0; oy < so; ++oy)
      for (Index ox = 0; ox < so; ++ox) {
        Real acc = l.bias[o];
        for (Index c = 0; c < l.in; ++c)
          for (Index dy = 0; dy < k; ++dy)
            for (Index dx = 0; dx < k; ++dx)
              acc += l.weight[((o * l.in + c) * k + dy) * k + dx] * padded[(c * sp + oy * st + dy) * sp + ox * st + dx];
        out[(o * so + oy) * so + ox] = std::max(acc, 0.0);
      }
  so_out = so;
  return out;
}

RealVector naive_dense(const DenseLayer& l, const RealVector& x, bool relu, Real slope = 0.0) {
  RealVector y(l.out);
  for (Index o = 0; o < l.out; ++o) {
    Real acc = l.bias[o];
    for (Index i = 0; i < l.in; ++i) acc += l.weight[o * l.in + i] * x[i];
    y[o] = relu ? (acc > 0 ? acc : slope * acc) : acc;
  }
  return y;
}

}  // namespace

TEST_CASE("conv output sizes") {
  CHECK(conv_output_size(33, Padding::valid) == 16);
  CHECK(conv_output_size(16, Padding::valid) == 7);
  CHECK(conv_output_size(7, Padding::valid) == 3);
  CHECK(conv_output_size(3, Padding::valid) == 1);
  CHECK(conv_output_size(8, Padding::same) == 4);
  CHECK(conv_output_size(9, Padding::same) == 5);
  CHECK(conv_output_size(2, Padding::valid) == 0);
}

TEST_CASE("default architectures") {
  auto m2 = DeepOnetMeta::default_2d();
  CHECK(m2.spatial_chain() == std::vector<Index>{33, 16, 7, 3, 1});
  CHECK(m2.flatten_width() == 180);
  CHECK(m2.branch_widths.front() == 180);
  CHECK(m2.branch_widths.back() == 256);
  m2.validate();
  auto m3 = DeepOnetMeta::default_3d();
  CHECK(m3.spatial_chain() == std::vector<Index>{17, 8, 4, 1});
  CHECK(m3.flatten_width() == 60);
  m3.validate();
  CHECK(DeepOnetMeta::from_json(m3.to_json()).to_json() == m3.to_json());

  auto bad = m2;
  bad.branch_widths.front() = 100;
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad = m2;
  bad.padding.pop_back();
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad = m2;
  bad.trunk_widths.back() = 7;
  CHECK_THROWS_AS(bad.validate(), FormatError);
}

TEST_CASE("zero weights give a zero output") {
  auto w = DeepOnetWeights::zeros(DeepOnetMeta::default_2d(16));
  const Index n = 33 * 33;
  auto k = random_field(n, 1), re = random_field(n, 2), im = random_field(n, 3);
  auto coords = node_coordinates(make_grid(2, 33));
  auto out = deeponet_infer(w, {k, re, im}, coords);
  CHECK(out.size() == n);
  CHECK(norm_inf(out) == 0.0);
}

TEST_CASE("branch forward matches an independent oracle") {
  auto meta = tiny_meta();
  meta.validate();
  auto w = DeepOnetWeights::random(meta, 17);
  const Index s = 9, n = s * s;
  auto k = random_field(n, 4), re = random_field(n, 5), im = random_field(n, 6);
  RealVector x(3 * n);
  std::copy(k.begin(), k.end(), x.begin());
  std::copy(re.begin(), re.end(), x.begin() + n);
  std::copy(im.begin(), im.end(), x.begin() + 2 * n);
  Index size = s;
  for (const auto& l : w.conv) x = naive_conv2d(l, x, size, size);
  CHECK(size == 2);
  for (Index i = 0; i < w.branch_fc.size(); ++i) x = naive_dense(w.branch_fc[i], x, i + 1 < w.branch_fc.size());
  auto b = branch_forward(w, {k, re, im});
  REQUIRE(b.size() == 6);
  for (Index i = 0; i < 6; ++i) CHECK(b[i] == doctest::Approx(x[i]).epsilon(1e-12));

  // trunk with leaky ReLU on hidden layers, linear output
  auto coords = node_coordinates(make_grid(2, 5));
  auto t = trunk_eval(w, coords);
  REQUIRE(t.rows == 25);
  REQUIRE(t.cols == 3);
  for (Index i = 0; i < 25; ++i) {
    RealVector y{coords[2 * i], coords[2 * i + 1]};
    for (Index l = 0; l < w.trunk_fc.size(); ++l)
      y = naive_dense(w.trunk_fc[l], y, l + 1 < w.trunk_fc.size(), meta.leaky_slope);
    for (Index j = 0; j < 3; ++j) CHECK(t(i, j) == doctest::Approx(y[j]).epsilon(1e-12));
  }

  // inference = T b_re + i T b_im
  auto u = deeponet_infer(w, {k, re, im}, coords);
  for (Index i = 0; i < 25; ++i) {
    Complex e{};
    for (Index j = 0; j < 3; ++j) e += t(i, j) * Complex{b[j], b[3 + j]};
    CHECK(std::abs(u[i] - e) <= 1e-12 * (1 + std::abs(e)));
  }
}

TEST_CASE("trunk rows do not depend on the query batch") {
  auto w = DeepOnetWeights::random(tiny_meta(), 3);
  auto all = node_coordinates(make_grid(2, 9));
  auto t_all = trunk_eval(w, all);
  RealVector some{all[2 * 40], all[2 * 40 + 1], all[2 * 7], all[2 * 7 + 1]};
  auto t_some = trunk_eval(w, some);
  for (Index j = 0; j < 3; ++j) {
    CHECK(t_some(0, j) == t_all(40, j));
    CHECK(t_some(1, j) == t_all(7, j));
  }
}

TEST_CASE("3D forward runs on the default architecture") {
  auto w = DeepOnetWeights::random(DeepOnetMeta::default_3d(8), 5);
  const Index n = 17 * 17 * 17;
  auto k = random_field(n, 1), re = random_field(n, 2), im = random_field(n, 3);
  auto b = branch_forward(w, {k, re, im});
  CHECK(b.size() == 16);
  RealVector bad(10);
  CHECK_THROWS_AS(branch_forward(w, {bad, bad, bad}), DimensionError);
}

TEST_CASE("weights container round trip and errors") {
  auto dir = tmp_dir();
  auto w = DeepOnetWeights::random(tiny_meta(), 9);
  save_weights(dir / "w64.nten", w, DType::f64);
  auto back = load_weights(dir / "w64.nten");
  CHECK(back.meta.to_json() == w.meta.to_json());
  REQUIRE(back.conv.size() == w.conv.size());
  CHECK(back.conv[1].weight == w.conv[1].weight);
  CHECK(back.trunk_fc[0].bias == w.trunk_fc[0].bias);

  auto c = w.to_container(DType::f64);
  CHECK(c.contains("branch.conv0.weight"));
  CHECK(c.at("branch.conv0.weight").shape == std::vector<std::uint64_t>{2, 3, 3, 3});
  CHECK(c.contains("trunk.fc1.bias"));

  // shape mismatch names the tensor
  auto bad = c;
  bad.tensors["branch.fc0.bias"] = Tensor::from_f64({5}, RealVector(5, 0.0));
  try {
    DeepOnetWeights::from_container(bad);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("branch.fc0.bias") != std::string::npos);
  }
  // missing tensor
  bad = c;
  bad.tensors.erase("trunk.fc0.weight");
  CHECK_THROWS_AS(DeepOnetWeights::from_container(bad), FormatError);

  // truncated file
  auto bytes = serialize_container(c);
  bytes.resize(bytes.size() - 8);
  {
    std::ofstream out(dir / "trunc.nten", std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  try {
    load_weights(dir / "trunc.nten");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("tensor '") != std::string::npos);
  }
}

TEST_CASE("neural-operator preconditioner contract") {
  ProblemSpec p;
  p.grid = make_grid(2, 33);
  p.k.assign(p.grid.num_nodes(), 6.0);
  p.mask = mask_from_shape(p.grid, CubeShape{{0.5, 0.5, 0.5}, 0.25});
  auto sys = assemble(p);
  auto w = std::make_shared<DeepOnetWeights>(DeepOnetWeights::random(DeepOnetMeta::default_2d(8), 21));
  NoPreconditioner m(w, sys);
  CHECK_FALSE(m.linear());
  CHECK(m.name() == "deeponet");
  const Index n = sys.size();
  CHECK(norm2(m.apply(ComplexVector(n))) == 0.0);

  auto r = random_vector(n, 8);
  auto z = m.apply(r);
  for (Index row : sys.dirichlet_rows) CHECK(z[row] == Complex{});
  CHECK(norm2(z) > 0.0);
  // positive homogeneity
  ComplexVector r3(n);
  for (Index i = 0; i < n; ++i) r3[i] = 3.5 * r[i];
  auto z3 = m.apply(r3);
  for (Index i = 0; i < n; ++i) z[i] *= 3.5;
  CHECK(rel_diff(z3, z) < 1e-12);

  // the 3D weights cannot serve a 2D system
  auto w3 = std::make_shared<DeepOnetWeights>(DeepOnetWeights::zeros(DeepOnetMeta::default_3d(4)));
  CHECK_THROWS(NoPreconditioner(w3, sys));
}
