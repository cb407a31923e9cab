// SPDX-License-Identifier: Apache-2.0
#include <helm/csr_matrix.hpp>

#include <algorithm>
#include <string>

namespace helm {

namespace {

void check_structure(Index nrows, Index ncols, const std::vector<Index>& offsets,
                     const std::vector<Index>& cols, std::size_t nvals) {
  if (offsets.size() != nrows + 1 || offsets.front() != 0)
    throw DimensionError("csr: row_offsets must have nrows+1 entries starting at 0");
  for (Index i = 0; i < nrows; ++i) {
    if (offsets[i + 1] < offsets[i]) throw DimensionError("csr: row_offsets must be non-decreasing");
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      if (cols[p] >= ncols) throw DimensionError("csr: column index out of range");
      if (p > offsets[i] && cols[p] <= cols[p - 1])
        throw DimensionError("csr: column indices must be strictly increasing in row " +
                             std::to_string(i));
    }
  }
  if (offsets.back() != cols.size() || cols.size() != nvals)
    throw DimensionError("csr: nnz mismatch between row_offsets, col_indices and values");
}

}  // namespace

ComplexCsrMatrix ComplexCsrMatrix::from_triplets(Index nrows, Index ncols,
                                                 std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= nrows || t.col >= ncols) throw DimensionError("csr: triplet index out of range");
  }
  if (nrows == ncols) {
    for (Index i = 0; i < nrows; ++i) triplets.push_back({i, i, Complex{}});
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  ComplexCsrMatrix m;
  m.nrows_ = nrows;
  m.ncols_ = ncols;
  m.row_offsets_.assign(nrows + 1, 0);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (Index k = 0; k < triplets.size();) {
    Index r = triplets[k].row, c = triplets[k].col;
    Complex v{};
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) v += triplets[k++].value;
    m.col_indices_.push_back(c);
    m.values_.push_back(v);
    ++m.row_offsets_[r + 1];
  }
  for (Index i = 0; i < nrows; ++i) m.row_offsets_[i + 1] += m.row_offsets_[i];
  m.index_diagonal();
  return m;
}

ComplexCsrMatrix ComplexCsrMatrix::from_csr(Index nrows, Index ncols, std::vector<Index> row_offsets,
                                            std::vector<Index> col_indices,
                                            std::vector<Complex> values) {
  check_structure(nrows, ncols, row_offsets, col_indices, values.size());
  if (nrows == ncols) {
    // Insert any missing structural diagonal through the triplet path.
    bool all_diag = true;
    for (Index i = 0; i < nrows && all_diag; ++i) {
      auto b = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
      auto e = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
      all_diag = std::binary_search(b, e, i);
    }
    if (!all_diag) {
      std::vector<Triplet> t;
      t.reserve(values.size());
      for (Index i = 0; i < nrows; ++i)
        for (Index p = row_offsets[i]; p < row_offsets[i + 1]; ++p) t.push_back({i, col_indices[p], values[p]});
      return from_triplets(nrows, ncols, std::move(t));
    }
  }
  ComplexCsrMatrix m;
  m.nrows_ = nrows;
  m.ncols_ = ncols;
  m.row_offsets_ = std::move(row_offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  m.index_diagonal();
  return m;
}

ComplexCsrMatrix ComplexCsrMatrix::from_dense(Index nrows, Index ncols, std::span<const Complex> dense) {
  require(dense.size() == nrows * ncols, "csr: dense input size mismatch");
  std::vector<Triplet> t;
  for (Index i = 0; i < nrows; ++i)
    for (Index j = 0; j < ncols; ++j)
      if (dense[i * ncols + j] != Complex{}) t.push_back({i, j, dense[i * ncols + j]});
  return from_triplets(nrows, ncols, std::move(t));
}

ComplexCsrMatrix ComplexCsrMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (Index i = 0; i < n; ++i) t.push_back({i, i, Complex{1.0, 0.0}});
  return from_triplets(n, n, std::move(t));
}

void ComplexCsrMatrix::index_diagonal() {
  diag_pos_.clear();
  if (!square()) return;
  diag_pos_.resize(nrows_);
  for (Index i = 0; i < nrows_; ++i) {
    auto b = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto e = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    auto it = std::lower_bound(b, e, i);
    if (it == e || *it != i) throw DimensionError("csr: missing structural diagonal in row " + std::to_string(i));
    diag_pos_[i] = static_cast<Index>(it - col_indices_.begin());
  }
}

Complex ComplexCsrMatrix::at(Index i, Index j) const {
  auto b = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  auto e = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return {};
  return values_[static_cast<Index>(it - col_indices_.begin())];
}

ComplexVector ComplexCsrMatrix::matvec(std::span<const Complex> x) const {
  ComplexVector y(nrows_);
  matvec(x, y);
  return y;
}

void ComplexCsrMatrix::matvec(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != ncols_ || y.size() != nrows_)
    throw DimensionError("csr matvec: expected x of length " + std::to_string(ncols_) + ", got " +
                         std::to_string(x.size()));
  for (Index i = 0; i < nrows_; ++i) {
    Complex s{};
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += values_[p] * x[col_indices_[p]];
    y[i] = s;
  }
}

void ComplexCsrMatrix::residual(std::span<const Complex> b, std::span<const Complex> x,
                                std::span<Complex> r) const {
  if (x.size() != ncols_ || b.size() != nrows_ || r.size() != nrows_)
    throw DimensionError("csr residual: dimension mismatch");
  for (Index i = 0; i < nrows_; ++i) {
    Complex s{};
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += values_[p] * x[col_indices_[p]];
    r[i] = b[i] - s;
  }
}

ComplexVector ComplexCsrMatrix::triangular_solve(std::span<const Complex> b, TrianglePart part,
                                                 DiagonalKind diag) const {
  if (!square() || b.size() != nrows_) throw DimensionError("triangular_solve: dimension mismatch");
  ComplexVector x(b.begin(), b.end());
  auto solve_row = [&](Index i) {
    Complex s = x[i];
    Complex d{1.0, 0.0};
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      Index j = col_indices_[p];
      if (j == i) {
        d = values_[p];
      } else if ((part == TrianglePart::lower && j < i) || (part == TrianglePart::upper && j > i)) {
        s -= values_[p] * x[j];
      }
    }
    if (diag == DiagonalKind::unit) {
      x[i] = s;
    } else {
      if (d == Complex{}) throw SingularMatrixError("triangular_solve: zero diagonal in row " + std::to_string(i));
      x[i] = s / d;
    }
  };
  if (part == TrianglePart::lower) {
    for (Index i = 0; i < nrows_; ++i) solve_row(i);
  } else {
    for (Index i = nrows_; i-- > 0;) solve_row(i);
  }
  return x;
}

ComplexCsrMatrix ComplexCsrMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) t.push_back({col_indices_[p], i, values_[p]});
  return from_triplets(ncols_, nrows_, std::move(t));
}

ComplexVector ComplexCsrMatrix::to_dense() const {
  ComplexVector d(nrows_ * ncols_);
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) d[i * ncols_ + col_indices_[p]] = values_[p];
  return d;
}

Index ComplexCsrMatrix::lower_bandwidth() const {
  Index bw = 0;
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      if (col_indices_[p] < i) bw = std::max(bw, i - col_indices_[p]);
  return bw;
}

Index ComplexCsrMatrix::upper_bandwidth() const {
  Index bw = 0;
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      if (col_indices_[p] > i) bw = std::max(bw, col_indices_[p] - i);
  return bw;
}

ComplexCsrMatrix multiply(const ComplexCsrMatrix& a, const ComplexCsrMatrix& b) {
  if (a.ncols() != b.nrows()) throw DimensionError("csr multiply: inner dimension mismatch");
  const Index n = a.nrows(), m = b.ncols();
  std::vector<Index> offsets(n + 1, 0);
  std::vector<Index> cols;
  std::vector<Complex> vals;
  std::vector<Complex> acc(m);
  std::vector<Index> marker(m, static_cast<Index>(-1));
  std::vector<Index> row_cols;
  auto ao = a.row_offsets(), ac = a.col_indices();
  auto av = a.values();
  auto bo = b.row_offsets(), bc = b.col_indices();
  auto bv = b.values();
  for (Index i = 0; i < n; ++i) {
    row_cols.clear();
    if (n == m) {
      marker[i] = i;
      row_cols.push_back(i);
      acc[i] = {};
    }
    for (Index p = ao[i]; p < ao[i + 1]; ++p) {
      Index k = ac[p];
      for (Index q = bo[k]; q < bo[k + 1]; ++q) {
        Index j = bc[q];
        if (marker[j] != i) {
          marker[j] = i;
          row_cols.push_back(j);
          acc[j] = {};
        }
        acc[j] += av[p] * bv[q];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (Index j : row_cols) {
      cols.push_back(j);
      vals.push_back(acc[j]);
    }
    offsets[i + 1] = cols.size();
  }
  return ComplexCsrMatrix::from_csr(n, m, std::move(offsets), std::move(cols), std::move(vals));
}

ComplexCsrMatrix scaled(const ComplexCsrMatrix& a, Complex alpha) {
  std::vector<Index> offsets(a.row_offsets().begin(), a.row_offsets().end());
  std::vector<Index> cols(a.col_indices().begin(), a.col_indices().end());
  std::vector<Complex> vals(a.values().begin(), a.values().end());
  for (auto& v : vals) v *= alpha;
  return ComplexCsrMatrix::from_csr(a.nrows(), a.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace helm
