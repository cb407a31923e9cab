// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/csr_matrix.hpp>

#include <cstdint>

namespace helm {

/// Default memory ceiling for band storage (4 GiB).
inline constexpr std::uint64_t kDefaultBandLuMemoryCap = 4ull << 30;

/// Partial-pivoted LU factorization in band storage.
///
/// Row interchanges can widen the upper band by the lower bandwidth, so
/// each row keeps lower + upper + lower entries. On lexicographically
/// ordered m^d grids the bandwidth is m^(d-1).
class BandLuFactorization {
 public:
  static BandLuFactorization factor(const ComplexCsrMatrix& a,
                                    std::uint64_t memory_cap = kDefaultBandLuMemoryCap);

  /// Storage the factorization would need for a matrix of this shape.
  static std::uint64_t memory_bytes(Index n, Index lower, Index upper);

  ComplexVector solve(std::span<const Complex> b) const;
  void solve_in_place(std::span<Complex> x) const;

  Index size() const { return n_; }
  Index lower_bandwidth() const { return kl_; }
  Index upper_bandwidth() const { return ku_; }

 private:
  Complex& at(Index i, Index j) { return band_[i * width_ + (j + kl_ - i)]; }
  const Complex& at(Index i, Index j) const { return band_[i * width_ + (j + kl_ - i)]; }

  Index n_ = 0;
  Index kl_ = 0;
  Index ku_ = 0;
  Index width_ = 0;
  std::vector<Complex> band_;
  std::vector<Index> pivots_;
};

}  // namespace helm
