// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/preconditioner.hpp>

namespace helm {

enum class RelaxationKind : std::uint8_t { jacobi, gauss_seidel, sor, ssor };

const char* relaxation_name(RelaxationKind k);

struct RelaxationSpec {
  RelaxationKind kind = RelaxationKind::jacobi;
  /// Relaxation factor for SOR/SSOR; damping factor for Jacobi.
  Real omega = 1.0;
  Index sweeps = 1;
};

/// Classical splitting preconditioners:
///   jacobi        ω D⁻¹ r
///   gauss_seidel  (D + L)⁻¹ r
///   sor           ω (D + ωL)⁻¹ r
///   ssor          ω(2-ω) (D + ωU)⁻¹ D (D + ωL)⁻¹ r
/// With sweeps > 1 the single application is iterated through the
/// Richardson update z += M(r - A z).
class RelaxationPreconditioner final : public Preconditioner {
 public:
  using Preconditioner::apply;
  RelaxationPreconditioner(const ComplexCsrMatrix& a, RelaxationSpec spec);

  void apply(std::span<const Complex> r, std::span<Complex> z) const override;
  bool linear() const override { return true; }
  std::string name() const override { return relaxation_name(spec_.kind); }

  const RelaxationSpec& spec() const { return spec_; }

 private:
  void apply_once(std::span<const Complex> r, std::span<Complex> z) const;

  const ComplexCsrMatrix* a_;
  RelaxationSpec spec_;
};

ComplexVector relaxation_apply(const ComplexCsrMatrix& a, const RelaxationSpec& spec, std::span<const Complex> r);

}  // namespace helm
