// SPDX-License-Identifier: Apache-2.0
#include <helm/grf.hpp>

#include <doctest.h>

#include <numeric>

#include "test_util.hpp"

using namespace helm;

namespace {

Real mean_of(const RealVector& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<Real>(v.size()); }

// Dense covariance over all nodes, factored by plain Cholesky.
RealVector dense_cholesky_cov(const StructuredGrid& g, Real s, Real l) {
  const Index n = g.num_nodes();
  RealVector c(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      auto p = g.point(i), q = g.point(j);
      Real d2 = 0.0;
      for (int a = 0; a < 3; ++a) d2 += (p[a] - q[a]) * (p[a] - q[a]);
      c[i * n + j] = s * s * std::exp(-d2 / (2 * l * l));
    }
  return c;
}

}  // namespace

TEST_CASE("s -> 0 gives the constant mean") {
  GrfSpec spec{make_grid(2, 9), 6.0, 1e-12, 0.2, 5, std::nullopt};
  auto f = GrfSampler(spec).sample(0);
  for (auto v : f) CHECK(v == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("determinism and stream independence") {
  GrfSpec spec{make_grid(2, 17), 0.0, 1.0, 0.1, 42, std::nullopt};
  GrfSampler a(spec), b(spec);
  CHECK(a.sample(3) == b.sample(3));
  CHECK(a.sample(3) != a.sample(4));
  // batch order does not matter
  auto batch = sample_grf(spec, 5);
  CHECK(batch[4] == a.sample(4));
  spec.seed = 43;
  CHECK(GrfSampler(spec).sample(3) != a.sample(3));
  CHECK(stream_seed(1, 2) == stream_seed(1, 2));
  CHECK(stream_seed(1, 2) != stream_seed(2, 1));
}

TEST_CASE("Kronecker factor reproduces the dense covariance on 5x5") {
  auto g = make_grid(2, 5);
  const Real s = 1.3, l = 0.4;
  GrfSampler sampler({g, 0.0, s, l, 1, std::nullopt});
  const Index m = 5, n = 25;
  const auto& L = sampler.axis_factor();
  // Implied covariance: s^2 (L (x) L)(L (x) L)^T, compared to the dense kernel.
  auto dense = dense_cholesky_cov(g, s, l);
  Real worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Index ix = i % m, iy = i / m, jx = j % m, jy = j / m;
      Real cx = 0.0, cy = 0.0;
      for (Index k = 0; k < m; ++k) {
        cx += L[ix * m + k] * L[jx * m + k];
        cy += L[iy * m + k] * L[jy * m + k];
      }
      worst = std::max(worst, std::abs(s * s * cx * cy - dense[i * n + j]));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("empirical mean, variance and correlation") {
  auto g = make_grid(2, 9);
  const Real mean = 2.0, s = 0.5, l = 0.3;
  GrfSampler sampler({g, mean, s, l, 7, std::nullopt});
  const Index samples = 4000;
  const Index a = g.index({2, 4, 0}), b = g.index({4, 4, 0});
  Real sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (Index i = 0; i < samples; ++i) {
    auto f = sampler.sample(i);
    const Real x = f[a] - mean, y = f[b] - mean;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const Real N = static_cast<Real>(samples);
  CHECK(std::abs(sa / N) < 0.05);
  CHECK(saa / N == doctest::Approx(s * s).epsilon(0.08));
  CHECK(sbb / N == doctest::Approx(s * s).epsilon(0.08));
  const Real dx = 2 * g.spacing();
  const Real rho = std::exp(-dx * dx / (2 * l * l));
  CHECK(sab / std::sqrt(saa * sbb) == doctest::Approx(rho).epsilon(0.05));
}

TEST_CASE("rejection sampling") {
  GrfSpec spec{make_grid(2, 17), 6.0, 0.5, 0.3, 11, 3.0};
  Index rej = 1000;
  auto k = GrfSampler(spec).sample_accepted(0, &rej);
  CHECK(rej < 1000);
  CHECK(*std::min_element(k.begin(), k.end()) > 3.0);
  CHECK(sample_wavenumber(spec) == k);

  // a threshold barely below the mean rejects almost everything
  GrfSpec tight{make_grid(2, 17), 6.0, 2.0, 0.05, 1, 5.999};
  CHECK_THROWS_AS(GrfSampler(tight).sample_accepted(0, nullptr, 20), Error);

  spec.min_reject = 7.0;
  CHECK_THROWS_AS(GrfSampler{spec}, ConfigError);
  spec.min_reject.reset();
  spec.s = 0.0;
  CHECK_THROWS_AS(GrfSampler{spec}, ConfigError);
}

TEST_CASE("scale_wavenumber") {
  RealVector base{3.0, 6.0, 9.0};
  auto scaled = scale_wavenumber(base, 12.0);
  CHECK(scaled == RealVector{6.0, 12.0, 18.0});
  CHECK(mean_of(scaled) == doctest::Approx(12.0));
  CHECK_THROWS_AS(scale_wavenumber(base, 0.0), ConfigError);
  CHECK_THROWS_AS(scale_wavenumber(RealVector{-1.0, -2.0}, 6.0), ConfigError);
  CHECK(scale_wavenumber(RealVector{}, 6.0).empty());
}
