// SPDX-License-Identifier: Apache-2.0
#include <helm/grf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace helm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

RealVector cholesky_rbf_1d(Index m, Real h, Real l, int axis) {
  RealVector c(m * m, 0.0);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      Real dx = (static_cast<Real>(i) - static_cast<Real>(j)) * h;
      c[i * m + j] = std::exp(-dx * dx / (2.0 * l * l));
    }
  for (Index i = 0; i < m; ++i) c[i * m + i] += 1e-10;
  for (Index j = 0; j < m; ++j) {
    Real d = c[j * m + j];
    for (Index k = 0; k < j; ++k) d -= c[j * m + k] * c[j * m + k];
    if (!(d > 0.0))
      throw Error("grf: Cholesky failed on axis " + std::to_string(axis) + " at row " + std::to_string(j));
    d = std::sqrt(d);
    c[j * m + j] = d;
    for (Index i = j + 1; i < m; ++i) {
      Real s = c[i * m + j];
      for (Index k = 0; k < j; ++k) s -= c[i * m + k] * c[j * m + k];
      c[i * m + j] = s / d;
    }
    for (Index k = j + 1; k < m; ++k) c[j * m + k] = 0.0;
  }
  return c;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1342543de82ef95ull));
}

GrfSampler::GrfSampler(GrfSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.s > 0.0) || !(spec_.l > 0.0)) throw ConfigError("grf: s and l must be positive");
  if (spec_.min_reject && !(*spec_.min_reject < spec_.mean))
    throw ConfigError("grf: min_reject must be below the mean");
  // Every axis has the same m and h, so one factor serves all axes.
  factor_ = cholesky_rbf_1d(spec_.grid.nodes_per_axis(), spec_.grid.spacing(), spec_.l, 0);
}

RealVector GrfSampler::sample_stream(std::uint64_t stream) const {
  const auto& g = spec_.grid;
  const Index m = g.nodes_per_axis(), n = g.num_nodes();
  std::mt19937_64 rng(stream);
  std::normal_distribution<Real> normal(0.0, 1.0);
  RealVector z(n);
  for (auto& v : z) v = normal(rng);

  // Mode-a product with the lower-triangular factor, axis by axis.
  RealVector tmp(n);
  Index stride = 1;
  for (int a = 0; a < g.dim(); ++a) {
    for (Index node = 0; node < n; ++node) {
      const Index i = (node / stride) % m;
      const Index base = node - i * stride;
      Real s = 0.0;
      for (Index k = 0; k <= i; ++k) s += factor_[i * m + k] * z[base + k * stride];
      tmp[node] = s;
    }
    std::swap(z, tmp);
    stride *= m;
  }
  for (auto& v : z) v = spec_.mean + spec_.s * v;
  return z;
}

RealVector GrfSampler::sample(std::uint64_t index) const { return sample_stream(stream_seed(spec_.seed, index)); }

RealVector GrfSampler::sample_accepted(std::uint64_t index, Index* rejections, Index max_attempts) const {
  if (!spec_.min_reject) {
    if (rejections) *rejections = 0;
    return sample(index);
  }
  for (Index attempt = 0; attempt < max_attempts; ++attempt) {
    auto f = attempt == 0 ? sample(index) : sample_stream(stream_seed(spec_.seed, index, attempt));
    if (*std::min_element(f.begin(), f.end()) > *spec_.min_reject) {
      if (rejections) *rejections = attempt;
      return f;
    }
  }
  throw Error("grf: more than " + std::to_string(max_attempts) + " consecutive rejections");
}

std::vector<RealVector> sample_grf(const GrfSpec& spec, Index count) {
  GrfSampler sampler(spec);
  std::vector<RealVector> out;
  out.reserve(count);
  for (Index i = 0; i < count; ++i) out.push_back(sampler.sample(i));
  return out;
}

RealVector sample_wavenumber(const GrfSpec& spec, Index* rejections) {
  return GrfSampler(spec).sample_accepted(0, rejections);
}

RealVector scale_wavenumber(std::span<const Real> field, Real target_mean, Real base_mean) {
  if (!(target_mean > 0.0)) throw ConfigError("scale_wavenumber: target mean must be positive");
  if (field.empty()) return {};
  const Real mean = std::accumulate(field.begin(), field.end(), 0.0) / static_cast<Real>(field.size());
  if (!(mean > 0.0)) throw ConfigError("scale_wavenumber: field mean must be positive");
  RealVector out(field.begin(), field.end());
  const Real factor = target_mean / base_mean;
  for (auto& v : out) v *= factor;
  return out;
}

}  // namespace helm
