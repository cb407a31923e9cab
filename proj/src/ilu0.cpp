// SPDX-License-Identifier: Apache-2.0
#include <helm/ilu0.hpp>

#include <string>

namespace helm {

Ilu0Factorization Ilu0Factorization::factor(const ComplexCsrMatrix& a) {
  if (!a.square()) throw DimensionError("ilu0: matrix must be square");
  Ilu0Factorization f;
  f.lu_ = a;
  const Index n = a.nrows();
  auto ro = f.lu_.row_offsets();
  auto ci = f.lu_.col_indices();
  auto w = f.lu_.values_mut();
  std::vector<Index> pos(n, static_cast<Index>(-1));

  // IKJ variant: row i is eliminated against the already-factored rows k < i.
  for (Index i = 0; i < n; ++i) {
    for (Index p = ro[i]; p < ro[i + 1]; ++p) pos[ci[p]] = p;
    for (Index p = ro[i]; p < ro[i + 1] && ci[p] < i; ++p) {
      const Index k = ci[p];
      const Complex ukk = w[f.lu_.diag_position(k)];
      if (ukk == Complex{}) throw SingularMatrixError("ilu0: zero pivot at row " + std::to_string(k));
      w[p] /= ukk;
      const Complex lik = w[p];
      for (Index q = f.lu_.diag_position(k) + 1; q < ro[k + 1]; ++q) {
        const Index j = ci[q];
        if (pos[j] != static_cast<Index>(-1)) w[pos[j]] -= lik * w[q];
      }
    }
    if (w[f.lu_.diag_position(i)] == Complex{})
      throw SingularMatrixError("ilu0: zero pivot at row " + std::to_string(i));
    for (Index p = ro[i]; p < ro[i + 1]; ++p) pos[ci[p]] = static_cast<Index>(-1);
  }
  return f;
}

void Ilu0Factorization::apply(std::span<const Complex> r, std::span<Complex> z) const {
  const Index n = lu_.nrows();
  if (r.size() != n || z.size() != n) throw DimensionError("ilu0 apply: dimension mismatch");
  auto ro = lu_.row_offsets();
  auto ci = lu_.col_indices();
  auto w = lu_.values();
  for (Index i = 0; i < n; ++i) {
    Complex s = r[i];
    for (Index p = ro[i]; p < lu_.diag_position(i); ++p) s -= w[p] * z[ci[p]];
    z[i] = s;
  }
  for (Index i = n; i-- > 0;) {
    Complex s = z[i];
    for (Index p = lu_.diag_position(i) + 1; p < ro[i + 1]; ++p) s -= w[p] * z[ci[p]];
    z[i] = s / w[lu_.diag_position(i)];
  }
}

ComplexVector Ilu0Factorization::apply(std::span<const Complex> r) const {
  ComplexVector z(r.size());
  apply(r, z);
  return z;
}

}  // namespace helm
