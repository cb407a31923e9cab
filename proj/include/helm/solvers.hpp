// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/preconditioner.hpp>
#include <helm/report.hpp>

namespace helm {

struct SolveResult {
  ComplexVector u;
  ConvergenceReport report;
};

/// Raised on a Krylov recurrence breakdown; carries the report so far.
struct KrylovBreakdown : BreakdownError {
  KrylovBreakdown(const std::string& msg, ConvergenceReport partial)
      : BreakdownError(msg), partial(std::move(partial)) {}
  ConvergenceReport partial;
};

/// Preconditioned Richardson iteration from u = 0:
///   r = f - A u,  u <- u + M(r).
/// Stops at tol, at max_iters, or when the relative residual exceeds the
/// divergence threshold (reported, not thrown).
SolveResult richardson(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner& m,
                       const SolveControl& control);

/// Two-operator Richardson: each cycle performs n_r steps with M1, each
/// followed by a residual update, then one step with M2. Every substep
/// counts as an iteration and is checked for convergence.
SolveResult hybrid_richardson(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner& m1,
                              const Preconditioner& m2, Index n_r, const SolveControl& control);

/// Restarted right-preconditioned GMRES(restart). Arnoldi uses modified
/// Gram-Schmidt with one reorthogonalization pass; the iteration count is
/// the number of Arnoldi steps. The preconditioned directions are stored,
/// so flexible mode is exact for nonlinear M.
SolveResult gmres(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner* m,
                  const SolveControl& control);

/// Right-preconditioned BiCGStab; one iteration = two matvecs and two
/// preconditioner applications.
SolveResult bicgstab(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner* m,
                     const SolveControl& control);

}  // namespace helm
