// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/common.hpp>

#include <span>
#include <vector>

namespace helm {

struct Triplet {
  Index row;
  Index col;
  Complex value;
};

enum class TrianglePart { lower, upper };
enum class DiagonalKind { stored, unit };

/// Compressed sparse row matrix with complex entries.
///
/// Columns are strictly increasing within each row. Square matrices always
/// carry a structural diagonal entry in every row (an explicit zero is
/// inserted when the input has none), so Jacobi, Gauss-Seidel and ILU(0)
/// can locate the pivot in O(1).
class ComplexCsrMatrix {
 public:
  ComplexCsrMatrix() = default;

  /// Builds from unordered triplets; duplicates are summed.
  static ComplexCsrMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> triplets);

  /// Builds from raw CSR arrays, validating the structure.
  static ComplexCsrMatrix from_csr(Index nrows, Index ncols, std::vector<Index> row_offsets,
                                   std::vector<Index> col_indices, std::vector<Complex> values);

  /// Dense row-major input; zeros are dropped except on the diagonal.
  static ComplexCsrMatrix from_dense(Index nrows, Index ncols, std::span<const Complex> dense);

  static ComplexCsrMatrix identity(Index n);

  Index nrows() const { return nrows_; }
  Index ncols() const { return ncols_; }
  Index nnz() const { return values_.size(); }
  bool square() const { return nrows_ == ncols_; }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values_mut() { return values_; }

  /// Position of A(i,i) inside values(); only valid for square matrices.
  Index diag_position(Index row) const { return diag_pos_[row]; }
  Complex diag(Index row) const { return values_[diag_pos_[row]]; }

  /// A(i,j), zero when not stored.
  Complex at(Index i, Index j) const;

  /// y = A x
  ComplexVector matvec(std::span<const Complex> x) const;
  void matvec(std::span<const Complex> x, std::span<Complex> y) const;

  /// r = b - A x
  void residual(std::span<const Complex> b, std::span<const Complex> x, std::span<Complex> r) const;

  /// Solves triangle(A) x = b using only the referenced triangle of A.
  ComplexVector triangular_solve(std::span<const Complex> b, TrianglePart part,
                                 DiagonalKind diag) const;

  ComplexCsrMatrix transpose() const;

  /// Dense row-major copy (tests and small coarse problems only).
  ComplexVector to_dense() const;

  /// Largest i-j and j-i over stored entries.
  Index lower_bandwidth() const;
  Index upper_bandwidth() const;

 private:
  void index_diagonal();

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<Complex> values_;
  std::vector<Index> diag_pos_;
};

/// C = A * B
ComplexCsrMatrix multiply(const ComplexCsrMatrix& a, const ComplexCsrMatrix& b);

/// C = alpha * A
ComplexCsrMatrix scaled(const ComplexCsrMatrix& a, Complex alpha);

}  // namespace helm
