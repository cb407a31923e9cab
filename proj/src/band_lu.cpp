// SPDX-License-Identifier: Apache-2.0
#include <helm/band_lu.hpp>

#include <algorithm>
#include <string>

namespace helm {

std::uint64_t BandLuFactorization::memory_bytes(Index n, Index lower, Index upper) {
  return static_cast<std::uint64_t>(n) * (2 * lower + upper + 1) * sizeof(Complex);
}

BandLuFactorization BandLuFactorization::factor(const ComplexCsrMatrix& a, std::uint64_t memory_cap) {
  if (!a.square()) throw DimensionError("band_lu: matrix must be square");
  BandLuFactorization f;
  f.n_ = a.nrows();
  f.kl_ = a.lower_bandwidth();
  f.ku_ = a.upper_bandwidth();
  f.width_ = 2 * f.kl_ + f.ku_ + 1;
  const auto bytes = memory_bytes(f.n_, f.kl_, f.ku_);
  if (bytes > memory_cap)
    throw CapacityError("band_lu: factorization needs " + std::to_string(bytes) + " bytes, cap is " +
                        std::to_string(memory_cap));

  const Index n = f.n_, kl = f.kl_, kw = f.kl_ + f.ku_;
  f.band_.assign(n * f.width_, Complex{});
  f.pivots_.resize(n);
  auto ro = a.row_offsets();
  auto ci = a.col_indices();
  auto v = a.values();
  for (Index i = 0; i < n; ++i)
    for (Index p = ro[i]; p < ro[i + 1]; ++p) f.at(i, ci[p]) = v[p];

  for (Index k = 0; k < n; ++k) {
    const Index last_row = std::min(n - 1, k + kl);
    const Index last_col = std::min(n - 1, k + kw);
    Index piv = k;
    Real best = std::abs(f.at(k, k));
    for (Index i = k + 1; i <= last_row; ++i) {
      Real mag = std::abs(f.at(i, k));
      if (mag > best) {
        best = mag;
        piv = i;
      }
    }
    if (best == 0.0) throw SingularMatrixError("band_lu: exactly singular pivot at column " + std::to_string(k));
    f.pivots_[k] = piv;
    if (piv != k) {
      for (Index j = k; j <= last_col; ++j) std::swap(f.at(k, j), f.at(piv, j));
    }
    const Complex inv = 1.0 / f.at(k, k);
    for (Index i = k + 1; i <= last_row; ++i) {
      Complex& lik = f.at(i, k);
      if (lik == Complex{}) continue;
      lik *= inv;
      const Complex l = lik;
      // Row i stores column j at (j + kl - i); row k at (j + kl - k).
      Complex* row_i = f.band_.data() + i * f.width_ + (k + kl - i);
      const Complex* row_k = f.band_.data() + k * f.width_ + kl;
      for (Index j = 1; j <= last_col - k; ++j) row_i[j] -= l * row_k[j];
    }
  }
  return f;
}

void BandLuFactorization::solve_in_place(std::span<Complex> x) const {
  if (x.size() != n_) throw DimensionError("band_lu solve: dimension mismatch");
  const Index n = n_, kl = kl_, kw = kl_ + ku_;
  for (Index k = 0; k < n; ++k) {
    if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
    const Complex xk = x[k];
    if (xk == Complex{}) continue;
    const Index last_row = std::min(n - 1, k + kl);
    for (Index i = k + 1; i <= last_row; ++i) x[i] -= at(i, k) * xk;
  }
  for (Index k = n; k-- > 0;) {
    Complex s = x[k];
    const Index last_col = std::min(n - 1, k + kw);
    for (Index j = k + 1; j <= last_col; ++j) s -= at(k, j) * x[j];
    x[k] = s / at(k, k);
  }
}

ComplexVector BandLuFactorization::solve(std::span<const Complex> b) const {
  ComplexVector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

}  // namespace helm
