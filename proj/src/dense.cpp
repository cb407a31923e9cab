// SPDX-License-Identifier: Apache-2.0
#include <helm/dense.hpp>

#include <string>

namespace helm {

DenseLu DenseLu::factor(ComplexMatrix m, Index dim_cap) {
  if (m.rows != m.cols) throw DimensionError("dense_lu: matrix must be square");
  if (m.rows > dim_cap)
    throw CapacityError("dense_lu: order " + std::to_string(m.rows) + " exceeds cap " + std::to_string(dim_cap));
  DenseLu f;
  const Index n = m.rows;
  f.pivots_.resize(n);
  for (Index k = 0; k < n; ++k) {
    Index piv = k;
    Real best = std::abs(m(k, k));
    for (Index i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        piv = i;
      }
    }
    if (best == 0.0) throw SingularMatrixError("dense_lu: singular matrix at column " + std::to_string(k));
    f.pivots_[k] = piv;
    if (piv != k)
      for (Index j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
    const Complex inv = 1.0 / m(k, k);
    for (Index i = k + 1; i < n; ++i) {
      Complex l = m(i, k) * inv;
      m(i, k) = l;
      if (l == Complex{}) continue;
      for (Index j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  f.lu_ = std::move(m);
  return f;
}

void DenseLu::solve_in_place(std::span<Complex> x) const {
  const Index n = lu_.rows;
  if (x.size() != n) throw DimensionError("dense_lu solve: dimension mismatch");
  // Rows were swapped in full during factorization, so apply P first.
  for (Index k = 0; k < n; ++k)
    if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
  for (Index k = 0; k < n; ++k)
    for (Index i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
  for (Index k = n; k-- > 0;) {
    Complex s = x[k];
    for (Index j = k + 1; j < n; ++j) s -= lu_(k, j) * x[j];
    x[k] = s / lu_(k, k);
  }
}

ComplexVector DenseLu::solve(std::span<const Complex> b) const {
  ComplexVector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

ThinQr thin_qr(const RealMatrix& m) {
  const Index n = m.rows, s = m.cols;
  if (n < s) throw DimensionError("thin_qr: need rows >= cols");
  Real fro = 0.0;
  for (Real v : m.data) fro += v * v;
  fro = std::sqrt(fro);

  // Householder vectors are stored column-wise in `a` below the diagonal.
  RealMatrix a = m;
  RealVector beta(s, 0.0);
  RealVector diag(s, 0.0);
  for (Index j = 0; j < s; ++j) {
    Real norm = 0.0;
    for (Index i = j; i < n; ++i) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12 * fro || norm == 0.0)
      throw RankDeficientError("thin_qr: rank deficient at column " + std::to_string(j), j);
    const Real alpha = a(j, j) >= 0.0 ? -norm : norm;
    const Real v0 = a(j, j) - alpha;
    // v = [1, a(j+1:n, j)/v0], beta = -v0/alpha
    for (Index i = j + 1; i < n; ++i) a(i, j) /= v0;
    beta[j] = -v0 / alpha;
    diag[j] = alpha;
    a(j, j) = 1.0;
    for (Index c = j + 1; c < s; ++c) {
      Real w = 0.0;
      for (Index i = j; i < n; ++i) w += a(i, j) * a(i, c);
      w *= beta[j];
      for (Index i = j; i < n; ++i) a(i, c) -= w * a(i, j);
    }
  }

  ThinQr out{RealMatrix(n, s), RealMatrix(s, s)};
  for (Index j = 0; j < s; ++j) {
    out.r(j, j) = diag[j];
    for (Index c = j + 1; c < s; ++c) out.r(j, c) = a(j, c);
  }
  // Accumulate Q = H_0 ... H_{s-1} [I; 0] backwards.
  for (Index j = 0; j < s; ++j) out.q(j, j) = 1.0;
  for (Index j = s; j-- > 0;) {
    for (Index c = j; c < s; ++c) {
      Real w = 0.0;
      for (Index i = j; i < n; ++i) w += a(i, j) * out.q(i, c);
      w *= beta[j];
      for (Index i = j; i < n; ++i) out.q(i, c) -= w * a(i, j);
    }
  }
  // Nonnegative diagonal of R.
  for (Index j = 0; j < s; ++j) {
    if (out.r(j, j) < 0.0) {
      for (Index c = j; c < s; ++c) out.r(j, c) = -out.r(j, c);
      for (Index i = 0; i < n; ++i) out.q(i, j) = -out.q(i, j);
    }
  }
  return out;
}

ComplexVector matvec(const ComplexMatrix& m, std::span<const Complex> x) {
  if (x.size() != m.cols) throw DimensionError("dense matvec: dimension mismatch");
  ComplexVector y(m.rows);
  for (Index i = 0; i < m.rows; ++i) {
    Complex s{};
    for (Index j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace helm
