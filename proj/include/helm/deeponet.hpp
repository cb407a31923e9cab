// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/dense.hpp>
#include <helm/grid.hpp>
#include <helm/tensor_container.hpp>

#include <filesystem>
#include <string>

namespace helm {

enum class Padding : std::uint8_t { valid, same };

/// Spatial output size of a stride-2, kernel-3 convolution.
///   valid: floor((s - 3) / 2) + 1      same: ceil(s / 2)
Index conv_output_size(Index s, Padding p, Index kernel = 3, Index stride = 2);

/// Architecture metadata stored under "meta" in the weight container.
struct DeepOnetMeta {
  int dim = 2;
  Index m_b = 33;             // branch grid nodes per axis
  Index p = 128;              // trunk output width
  std::vector<Index> channels;       // conv channels, starting with 3 input channels
  std::vector<Padding> padding;      // one per conv layer
  std::vector<Index> branch_widths;  // dense widths after flatten, last = 2p
  std::vector<Index> trunk_widths;   // first = dim, last = p
  Real leaky_slope = 0.01;
  Index kernel = 3;
  Index stride = 2;

  /// Spatial sizes through the conv chain, starting at m_b.
  std::vector<Index> spatial_chain() const;
  /// Flattened conv output width.
  Index flatten_width() const;

  nlohmann::json to_json() const;
  static DeepOnetMeta from_json(const nlohmann::json& j);

  /// Throws FormatError on inconsistent widths or sizes.
  void validate() const;

  /// 2D architecture: CNN [3,40,60,100,180] valid padding on 33², FNN
  /// [180,256,256,2p], trunk [2,256,256,p].
  static DeepOnetMeta default_2d(Index p = 128);
  /// 3D architecture on 17³: CNN [3,40,40,60] with paddings
  /// valid/same/valid; dense input width derived from the flatten size.
  static DeepOnetMeta default_3d(Index p = 128);
};

struct ConvLayer {
  Index in = 0, out = 0;
  Padding padding = Padding::valid;
  RealVector weight;  // [out, in, k, k(, k)]
  RealVector bias;    // [out]
};

struct DenseLayer {
  Index in = 0, out = 0;
  RealVector weight;  // [out, in]
  RealVector bias;    // [out]
};

/// Branch CNN + dense head and trunk MLP.
///
/// Spatial tensors are laid out C-order with x as the fastest axis, which
/// coincides with the grid's lexicographic node order.
struct DeepOnetWeights {
  DeepOnetMeta meta;
  std::vector<ConvLayer> conv;
  std::vector<DenseLayer> branch_fc;
  std::vector<DenseLayer> trunk_fc;

  static DeepOnetWeights zeros(const DeepOnetMeta& meta);
  /// He-style uniform initialization; used by tests and smoke runs.
  static DeepOnetWeights random(const DeepOnetMeta& meta, std::uint64_t seed);

  static DeepOnetWeights from_container(const TensorContainer& c);
  TensorContainer to_container(DType dtype = DType::f32) const;
};

DeepOnetWeights load_weights(const std::filesystem::path& path);
void save_weights(const std::filesystem::path& path, const DeepOnetWeights& w, DType dtype = DType::f32);

/// Branch input channels on the m_b grid: wave number, Re f, Im f.
struct BranchInput {
  std::span<const Real> k;
  std::span<const Real> re;
  std::span<const Real> im;
};

/// Returns the 2p branch coefficients (first p real part, last p imaginary).
RealVector branch_forward(const DeepOnetWeights& w, const BranchInput& in);

/// T[i, j] = trunk_j(x_i) for coordinates given as an n x dim row-major array.
RealMatrix trunk_eval(const DeepOnetWeights& w, std::span<const Real> coords);

/// out_i = sum_j T_ij b_j + i sum_j T_ij b_{p+j}
ComplexVector combine_trunk_branch(const RealMatrix& trunk, std::span<const Real> branch);

ComplexVector deeponet_infer(const DeepOnetWeights& w, const BranchInput& in, std::span<const Real> coords);

}  // namespace helm
