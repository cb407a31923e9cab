// SPDX-License-Identifier: Apache-2.0
#include <helm/deeponet.hpp>

#include <cmath>
#include <random>

namespace helm {

namespace {

const char* padding_name(Padding p) { return p == Padding::same ? "same" : "valid"; }

Padding parse_padding(const std::string& s) {
  if (s == "valid") return Padding::valid;
  if (s == "same") return Padding::same;
  throw FormatError("deeponet meta: unknown padding '" + s + "'");
}

Index ipow(Index b, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

Index pad_before(Index s, Padding p, Index kernel, Index stride) {
  if (p == Padding::valid) return 0;
  const Index out = conv_output_size(s, p, kernel, stride);
  const Index needed = (out - 1) * stride + kernel;
  return needed > s ? (needed - s) / 2 : 0;
}

std::vector<std::uint64_t> to_shape(std::initializer_list<Index> dims) {
  return std::vector<std::uint64_t>(dims.begin(), dims.end());
}

RealVector load_tensor(const TensorContainer& c, const std::string& name, const std::vector<std::uint64_t>& shape) {
  const auto& t = c.at(name);
  if (t.shape != shape) {
    std::string want, got;
    for (auto d : shape) want += std::to_string(d) + ",";
    for (auto d : t.shape) got += std::to_string(d) + ",";
    throw FormatError("deeponet: tensor '" + name + "' has shape [" + got + "] but the architecture needs [" + want + "]");
  }
  return t.to_f64();
}

void dense_forward(const DenseLayer& l, std::span<const Real> x, RealVector& y) {
  y.assign(l.out, 0.0);
  for (Index o = 0; o < l.out; ++o) {
    Real s = l.bias[o];
    const Real* w = l.weight.data() + o * l.in;
    for (Index i = 0; i < l.in; ++i) s += w[i] * x[i];
    y[o] = s;
  }
}

}  // namespace

Index conv_output_size(Index s, Padding p, Index kernel, Index stride) {
  if (p == Padding::same) return (s + stride - 1) / stride;
  if (s < kernel) return 0;
  return (s - kernel) / stride + 1;
}

std::vector<Index> DeepOnetMeta::spatial_chain() const {
  std::vector<Index> sizes{m_b};
  for (auto pad : padding) sizes.push_back(conv_output_size(sizes.back(), pad, kernel, stride));
  return sizes;
}

Index DeepOnetMeta::flatten_width() const {
  return channels.back() * ipow(spatial_chain().back(), dim);
}

nlohmann::json DeepOnetMeta::to_json() const {
  nlohmann::json pads = nlohmann::json::array();
  for (auto p : padding) pads.push_back(padding_name(p));
  return {{"dim", dim},
          {"m_b", m_b},
          {"p", p},
          {"channels", channels},
          {"widths", {{"branch", branch_widths}, {"trunk", trunk_widths}}},
          {"padding_schedule", pads},
          {"leaky_slope", leaky_slope},
          {"kernel_size", kernel},
          {"stride", stride}};
}

DeepOnetMeta DeepOnetMeta::from_json(const nlohmann::json& j) {
  try {
    DeepOnetMeta m;
    m.dim = j.at("dim").get<int>();
    m.m_b = j.at("m_b").get<Index>();
    m.p = j.at("p").get<Index>();
    m.channels = j.at("channels").get<std::vector<Index>>();
    m.branch_widths = j.at("widths").at("branch").get<std::vector<Index>>();
    m.trunk_widths = j.at("widths").at("trunk").get<std::vector<Index>>();
    for (const auto& s : j.at("padding_schedule")) m.padding.push_back(parse_padding(s.get<std::string>()));
    m.leaky_slope = j.value("leaky_slope", 0.01);
    m.kernel = j.value("kernel_size", Index{3});
    m.stride = j.value("stride", Index{2});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("deeponet meta: ") + e.what());
  }
}

void DeepOnetMeta::validate() const {
  auto fail = [](const std::string& s) { throw FormatError("deeponet meta: " + s); };
  if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
  if (channels.size() < 2 || channels.front() != 3) fail("channels must start with 3 input channels");
  if (padding.size() != channels.size() - 1) fail("padding_schedule needs one entry per conv layer");
  const auto chain = spatial_chain();
  for (Index i = 1; i < chain.size(); ++i)
    if (chain[i] == 0) fail("conv layer " + std::to_string(i - 1) + " has empty output");
  if (branch_widths.size() < 2) fail("branch widths need at least input and output");
  if (branch_widths.front() != flatten_width())
    fail("branch dense input width " + std::to_string(branch_widths.front()) + " != flatten size " +
         std::to_string(flatten_width()));
  if (branch_widths.back() != 2 * p) fail("branch output width must be 2p");
  if (trunk_widths.size() < 2 || trunk_widths.front() != static_cast<Index>(dim)) fail("trunk input width must equal dim");
  if (trunk_widths.back() != p) fail("trunk output width must equal p");
}

DeepOnetMeta DeepOnetMeta::default_2d(Index p) {
  DeepOnetMeta m;
  m.dim = 2;
  m.m_b = 33;
  m.p = p;
  m.channels = {3, 40, 60, 100, 180};
  m.padding = {Padding::valid, Padding::valid, Padding::valid, Padding::valid};
  m.branch_widths = {m.flatten_width(), 256, 256, 2 * p};
  m.trunk_widths = {2, 256, 256, p};
  return m;
}

DeepOnetMeta DeepOnetMeta::default_3d(Index p) {
  DeepOnetMeta m;
  m.dim = 3;
  m.m_b = 17;
  m.p = p;
  m.channels = {3, 40, 40, 60};
  m.padding = {Padding::valid, Padding::same, Padding::valid};
  m.branch_widths = {m.flatten_width(), 256, 256, 2 * p};
  m.trunk_widths = {3, 256, 256, p};
  return m;
}

DeepOnetWeights DeepOnetWeights::zeros(const DeepOnetMeta& meta) {
  meta.validate();
  DeepOnetWeights w;
  w.meta = meta;
  const Index kvol = ipow(meta.kernel, meta.dim);
  for (Index i = 0; i + 1 < meta.channels.size(); ++i) {
    ConvLayer c;
    c.in = meta.channels[i];
    c.out = meta.channels[i + 1];
    c.padding = meta.padding[i];
    c.weight.assign(c.out * c.in * kvol, 0.0);
    c.bias.assign(c.out, 0.0);
    w.conv.push_back(std::move(c));
  }
  auto dense_stack = [](const std::vector<Index>& widths) {
    std::vector<DenseLayer> out;
    for (Index i = 0; i + 1 < widths.size(); ++i) {
      DenseLayer l;
      l.in = widths[i];
      l.out = widths[i + 1];
      l.weight.assign(l.in * l.out, 0.0);
      l.bias.assign(l.out, 0.0);
      out.push_back(std::move(l));
    }
    return out;
  };
  w.branch_fc = dense_stack(meta.branch_widths);
  w.trunk_fc = dense_stack(meta.trunk_widths);
  return w;
}

DeepOnetWeights DeepOnetWeights::random(const DeepOnetMeta& meta, std::uint64_t seed) {
  auto w = zeros(meta);
  std::mt19937_64 rng(seed);
  auto fill = [&](RealVector& v, Index fan_in) {
    std::uniform_real_distribution<Real> u(-1.0, 1.0);
    const Real bound = std::sqrt(6.0 / static_cast<Real>(fan_in));
    for (auto& x : v) x = bound * u(rng);
  };
  const Index kvol = ipow(meta.kernel, meta.dim);
  for (auto& c : w.conv) {
    fill(c.weight, c.in * kvol);
    fill(c.bias, c.in * kvol * 16);
  }
  for (auto* stack : {&w.branch_fc, &w.trunk_fc})
    for (auto& l : *stack) {
      fill(l.weight, l.in);
      fill(l.bias, l.in * 16);
    }
  return w;
}

DeepOnetWeights DeepOnetWeights::from_container(const TensorContainer& c) {
  if (!c.meta.is_object() || c.meta.empty()) throw FormatError("deeponet: container has no architecture meta");
  auto meta = DeepOnetMeta::from_json(c.meta);
  meta.validate();
  auto w = zeros(meta);
  const Index k = meta.kernel;
  for (Index i = 0; i < w.conv.size(); ++i) {
    auto& l = w.conv[i];
    const std::string base = "branch.conv" + std::to_string(i);
    auto shape = meta.dim == 2 ? to_shape({l.out, l.in, k, k}) : to_shape({l.out, l.in, k, k, k});
    l.weight = load_tensor(c, base + ".weight", shape);
    l.bias = load_tensor(c, base + ".bias", to_shape({l.out}));
  }
  auto load_stack = [&](std::vector<DenseLayer>& stack, const std::string& prefix) {
    for (Index i = 0; i < stack.size(); ++i) {
      auto& l = stack[i];
      const std::string base = prefix + std::to_string(i);
      l.weight = load_tensor(c, base + ".weight", to_shape({l.out, l.in}));
      l.bias = load_tensor(c, base + ".bias", to_shape({l.out}));
    }
  };
  load_stack(w.branch_fc, "branch.fc");
  load_stack(w.trunk_fc, "trunk.fc");
  return w;
}

TensorContainer DeepOnetWeights::to_container(DType dtype) const {
  TensorContainer c;
  c.meta = meta.to_json();
  const Index k = meta.kernel;
  for (Index i = 0; i < conv.size(); ++i) {
    const auto& l = conv[i];
    const std::string base = "branch.conv" + std::to_string(i);
    auto shape = meta.dim == 2 ? to_shape({l.out, l.in, k, k}) : to_shape({l.out, l.in, k, k, k});
    c.tensors[base + ".weight"] = Tensor::from_values(dtype, shape, l.weight);
    c.tensors[base + ".bias"] = Tensor::from_values(dtype, to_shape({l.out}), l.bias);
  }
  auto store = [&](const std::vector<DenseLayer>& stack, const std::string& prefix) {
    for (Index i = 0; i < stack.size(); ++i) {
      const auto& l = stack[i];
      const std::string base = prefix + std::to_string(i);
      c.tensors[base + ".weight"] = Tensor::from_values(dtype, to_shape({l.out, l.in}), l.weight);
      c.tensors[base + ".bias"] = Tensor::from_values(dtype, to_shape({l.out}), l.bias);
    }
  };
  store(branch_fc, "branch.fc");
  store(trunk_fc, "trunk.fc");
  return c;
}

DeepOnetWeights load_weights(const std::filesystem::path& path) {
  return DeepOnetWeights::from_container(read_container(path));
}

void save_weights(const std::filesystem::path& path, const DeepOnetWeights& w, DType dtype) {
  write_container(path, w.to_container(dtype));
}

RealVector branch_forward(const DeepOnetWeights& w, const BranchInput& in) {
  const auto& meta = w.meta;
  const Index nb = ipow(meta.m_b, meta.dim);
  if (in.k.size() != nb || in.re.size() != nb || in.im.size() != nb)
    throw DimensionError("branch_forward: channel fields must live on the " + std::to_string(meta.m_b) + "^" +
                         std::to_string(meta.dim) + " branch grid");
  const Index kk = meta.kernel, stride = meta.stride;
  const bool three_d = meta.dim == 3;

  // Activation tensor [C, Z, Y, X] with Z = 1 in 2D.
  Index s = meta.m_b;
  RealVector act(3 * nb);
  std::copy(in.k.begin(), in.k.end(), act.begin());
  std::copy(in.re.begin(), in.re.end(), act.begin() + static_cast<std::ptrdiff_t>(nb));
  std::copy(in.im.begin(), in.im.end(), act.begin() + static_cast<std::ptrdiff_t>(2 * nb));

  for (const auto& l : w.conv) {
    const Index so = conv_output_size(s, l.padding, kk, stride);
    const auto pad = static_cast<std::ptrdiff_t>(pad_before(s, l.padding, kk, stride));
    const Index zi = three_d ? s : 1, zo = three_d ? so : 1, kz = three_d ? kk : 1;
    RealVector out(l.out * zo * so * so);
    for (Index oc = 0; oc < l.out; ++oc)
      for (Index oz = 0; oz < zo; ++oz)
        for (Index oy = 0; oy < so; ++oy)
          for (Index ox = 0; ox < so; ++ox) {
            Real acc = l.bias[oc];
            for (Index ic = 0; ic < l.in; ++ic)
              for (Index dz = 0; dz < kz; ++dz) {
                const auto iz = three_d ? static_cast<std::ptrdiff_t>(oz * stride + dz) - pad : 0;
                if (iz < 0 || iz >= static_cast<std::ptrdiff_t>(zi)) continue;
                for (Index dy = 0; dy < kk; ++dy) {
                  const auto iy = static_cast<std::ptrdiff_t>(oy * stride + dy) - pad;
                  if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(s)) continue;
                  for (Index dx = 0; dx < kk; ++dx) {
                    const auto ix = static_cast<std::ptrdiff_t>(ox * stride + dx) - pad;
                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(s)) continue;
                    const Index widx = ((oc * l.in + ic) * kz + dz) * kk * kk + dy * kk + dx;
                    const Index aidx = ((ic * zi + static_cast<Index>(iz)) * s + static_cast<Index>(iy)) * s +
                                       static_cast<Index>(ix);
                    acc += l.weight[widx] * act[aidx];
                  }
                }
              }
            out[((oc * zo + oz) * so + oy) * so + ox] = std::max(acc, 0.0);
          }
    act = std::move(out);
    s = so;
  }

  RealVector y;
  for (Index i = 0; i < w.branch_fc.size(); ++i) {
    dense_forward(w.branch_fc[i], act, y);
    if (i + 1 < w.branch_fc.size())
      for (auto& v : y) v = std::max(v, 0.0);
    act.swap(y);
  }
  return act;
}

RealMatrix trunk_eval(const DeepOnetWeights& w, std::span<const Real> coords) {
  const auto d = static_cast<Index>(w.meta.dim);
  require(coords.size() % d == 0, "trunk_eval: coordinate array is not a multiple of dim");
  const Index n = coords.size() / d;
  RealMatrix t(n, w.meta.p);
  RealVector x, y;
  for (Index i = 0; i < n; ++i) {
    x.assign(coords.begin() + static_cast<std::ptrdiff_t>(i * d), coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    for (Index li = 0; li < w.trunk_fc.size(); ++li) {
      dense_forward(w.trunk_fc[li], x, y);
      if (li + 1 < w.trunk_fc.size())
        for (auto& v : y) v = v > 0.0 ? v : w.meta.leaky_slope * v;
      x.swap(y);
    }
    std::copy(x.begin(), x.end(), t.data.begin() + static_cast<std::ptrdiff_t>(i * w.meta.p));
  }
  return t;
}

ComplexVector combine_trunk_branch(const RealMatrix& trunk, std::span<const Real> branch) {
  const Index p = trunk.cols;
  require(branch.size() == 2 * p, "combine_trunk_branch: branch width must be 2p");
  ComplexVector out(trunk.rows);
  for (Index i = 0; i < trunk.rows; ++i) {
    Real re = 0.0, im = 0.0;
    const Real* row = trunk.data.data() + i * p;
    for (Index j = 0; j < p; ++j) {
      re += row[j] * branch[j];
      im += row[j] * branch[p + j];
    }
    out[i] = {re, im};
  }
  return out;
}

ComplexVector deeponet_infer(const DeepOnetWeights& w, const BranchInput& in, std::span<const Real> coords) {
  return combine_trunk_branch(trunk_eval(w, coords), branch_forward(w, in));
}

}  // namespace helm
