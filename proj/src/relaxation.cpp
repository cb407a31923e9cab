// SPDX-License-Identifier: Apache-2.0
#include <helm/relaxation.hpp>

#include <string>

namespace helm {

const char* relaxation_name(RelaxationKind k) {
  switch (k) {
    case RelaxationKind::jacobi: return "jacobi";
    case RelaxationKind::gauss_seidel: return "gs";
    case RelaxationKind::sor: return "sor";
    case RelaxationKind::ssor: return "ssor";
  }
  return "?";
}

RelaxationPreconditioner::RelaxationPreconditioner(const ComplexCsrMatrix& a, RelaxationSpec spec)
    : a_(&a), spec_(spec) {
  if (!a.square()) throw DimensionError("relaxation: matrix must be square");
  if (spec_.sweeps < 1) throw ConfigError("relaxation: sweeps must be >= 1");
  if ((spec_.kind == RelaxationKind::sor || spec_.kind == RelaxationKind::ssor) &&
      !(spec_.omega > 0.0 && spec_.omega < 2.0))
    throw ConfigError("relaxation: omega must lie in (0, 2)");
  if (spec_.kind == RelaxationKind::jacobi && !(spec_.omega > 0.0))
    throw ConfigError("relaxation: jacobi damping must be positive");
  for (Index i = 0; i < a.nrows(); ++i)
    if (a.diag(i) == Complex{}) throw SingularMatrixError("relaxation: zero diagonal in row " + std::to_string(i));
}

void RelaxationPreconditioner::apply_once(std::span<const Complex> r, std::span<Complex> z) const {
  const auto& a = *a_;
  const Index n = a.nrows();
  auto ro = a.row_offsets();
  auto ci = a.col_indices();
  auto v = a.values();
  const Real w = spec_.omega;

  // Forward solve of (D + c L) y = r into z.
  auto forward = [&](Real c, std::span<const Complex> rhs) {
    for (Index i = 0; i < n; ++i) {
      Complex s = rhs[i];
      for (Index p = ro[i]; p < a.diag_position(i); ++p) s -= c * v[p] * z[ci[p]];
      z[i] = s / v[a.diag_position(i)];
    }
  };

  switch (spec_.kind) {
    case RelaxationKind::jacobi:
      for (Index i = 0; i < n; ++i) z[i] = w * r[i] / a.diag(i);
      break;
    case RelaxationKind::gauss_seidel:
      forward(1.0, r);
      break;
    case RelaxationKind::sor:
      forward(w, r);
      for (auto& x : z) x *= w;
      break;
    case RelaxationKind::ssor: {
      forward(w, r);
      for (Index i = 0; i < n; ++i) z[i] *= a.diag(i);
      // Backward solve of (D + ωU) y = z in place.
      for (Index i = n; i-- > 0;) {
        Complex s = z[i];
        for (Index p = a.diag_position(i) + 1; p < ro[i + 1]; ++p) s -= w * v[p] * z[ci[p]];
        z[i] = s / v[a.diag_position(i)];
      }
      for (auto& x : z) x *= w * (2.0 - w);
      break;
    }
  }
}

void RelaxationPreconditioner::apply(std::span<const Complex> r, std::span<Complex> z) const {
  if (r.size() != a_->nrows() || z.size() != r.size()) throw DimensionError("relaxation: dimension mismatch");
  apply_once(r, z);
  if (spec_.sweeps == 1) return;
  ComplexVector res(r.size()), dz(r.size());
  for (Index s = 1; s < spec_.sweeps; ++s) {
    a_->residual(r, z, res);
    apply_once(res, dz);
    for (Index i = 0; i < z.size(); ++i) z[i] += dz[i];
  }
}

ComplexVector relaxation_apply(const ComplexCsrMatrix& a, const RelaxationSpec& spec, std::span<const Complex> r) {
  return RelaxationPreconditioner(a, spec).apply(r);
}

}  // namespace helm
