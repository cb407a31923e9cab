// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/common.hpp>

namespace helm {

/// Row-major dense matrix.
template <typename T>
struct DenseMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<T> data;

  DenseMatrix() = default;
  DenseMatrix(Index r, Index c) : rows(r), cols(c), data(r * c, T{}) {}

  T& operator()(Index i, Index j) { return data[i * cols + j]; }
  const T& operator()(Index i, Index j) const { return data[i * cols + j]; }

  static DenseMatrix identity(Index n) {
    DenseMatrix m(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }
};

using RealMatrix = DenseMatrix<Real>;
using ComplexMatrix = DenseMatrix<Complex>;

inline constexpr Index kDefaultCoarseDimCap = 512;

/// Partial-pivoted dense LU for small complex systems (coarse solves).
class DenseLu {
 public:
  static DenseLu factor(ComplexMatrix m, Index dim_cap = kDefaultCoarseDimCap);

  ComplexVector solve(std::span<const Complex> b) const;
  void solve_in_place(std::span<Complex> x) const;
  Index size() const { return lu_.rows; }

 private:
  ComplexMatrix lu_;
  std::vector<Index> pivots_;
};

inline ComplexVector dense_lu_solve(const ComplexMatrix& m, std::span<const Complex> b,
                                   Index dim_cap = kDefaultCoarseDimCap) {
  return DenseLu::factor(m, dim_cap).solve(b);
}

struct ThinQr {
  RealMatrix q;  // n x s, orthonormal columns
  RealMatrix r;  // s x s, upper triangular with nonnegative diagonal
};

/// Householder thin QR of an n x s real matrix (n >= s).
/// Throws RankDeficientError naming the first column j with
/// |R(j,j)| < 1e-12 * ||M||_F.
ThinQr thin_qr(const RealMatrix& m);

ComplexVector matvec(const ComplexMatrix& m, std::span<const Complex> x);

}  // namespace helm
