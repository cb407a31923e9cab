// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/grid.hpp>

#include <cstdint>
#include <limits>
#include <optional>

namespace helm {

/// Gaussian random field with RBF covariance
///   K(x, x') = s^2 exp(-|x - x'|^2 / (2 l^2))
/// on the nodes of a uniform grid.
struct GrfSpec {
  StructuredGrid grid;
  Real mean = 0.0;
  Real s = 1.0;
  Real l = 0.1;
  std::uint64_t seed = 0;
  /// Rejection threshold for wave-number fields: samples with
  /// min(field) <= min_reject are discarded.
  std::optional<Real> min_reject;
};

/// Samples by factoring the 1D per-axis covariance (Cholesky with a
/// 1e-10 s^2 nugget) and applying the Kronecker product of the factors to
/// i.i.d. standard normals. The RBF kernel is separable, so this is exact.
///
/// Sample `index` draws from its own RNG stream derived from (seed, index),
/// so results do not depend on batch size or evaluation order.
class GrfSampler {
 public:
  explicit GrfSampler(GrfSpec spec);

  const GrfSpec& spec() const { return spec_; }

  RealVector sample(std::uint64_t index) const;

  /// Rejection-sampled field for sample `index`; each attempt uses its own
  /// stream. Throws after `max_attempts` consecutive rejections.
  RealVector sample_accepted(std::uint64_t index, Index* rejections = nullptr,
                             Index max_attempts = 1000) const;

  /// Lower-triangular 1D Cholesky factor (row-major, m x m), unit variance.
  const RealVector& axis_factor() const { return factor_; }

 private:
  RealVector sample_stream(std::uint64_t stream) const;

  GrfSpec spec_;
  RealVector factor_;
};

/// Mixes (seed, a, b) into a 64-bit stream seed (splitmix64 finalizer).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

std::vector<RealVector> sample_grf(const GrfSpec& spec, Index count);

/// First accepted wave-number field for sample 0 of the spec.
RealVector sample_wavenumber(const GrfSpec& spec, Index* rejections = nullptr);

/// Rescales a base wave-number field (mean 6) to a target mean:
/// field * target_mean / 6.
RealVector scale_wavenumber(std::span<const Real> field, Real target_mean, Real base_mean = 6.0);

}  // namespace helm
