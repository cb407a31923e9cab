// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/csr_matrix.hpp>

namespace helm {

/// ILU(0): incomplete LU restricted to the sparsity pattern of A.
///
/// L (unit diagonal, strictly lower part) and U (upper part including the
/// diagonal) share A's CSR structure. No pivoting; a zero pivot is an error.
class Ilu0Factorization {
 public:
  static Ilu0Factorization factor(const ComplexCsrMatrix& a);

  /// U^{-1} L^{-1} r
  ComplexVector apply(std::span<const Complex> r) const;
  void apply(std::span<const Complex> r, std::span<Complex> z) const;

  /// Combined L\U values on A's pattern.
  const ComplexCsrMatrix& factors() const { return lu_; }

 private:
  ComplexCsrMatrix lu_;
};

}  // namespace helm
