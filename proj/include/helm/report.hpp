// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/common.hpp>

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>

namespace helm {

struct SolveControl {
  Real tol = 1e-12;  // relative residual ||r||_2 / ||rhs||_2
  Index max_iters = 10000;
  Index restart = 50;  // GMRES only
  /// Relative residual above which a stationary iteration is declared divergent.
  Real divergence_threshold = 1e6;
  /// Permits nonlinear preconditioners inside GMRES (which then runs in
  /// flexible mode) and BiCGStab.
  bool flexible = false;
};

struct ConvergenceReport {
  std::string solver;
  std::string preconditioner;
  Index iterations = 0;
  Index matvecs = 0;
  RealVector residual_history;  // relative residuals, [0] = initial
  bool converged = false;
  bool diverged = false;
  Real wall_time = 0.0;  // seconds
  std::optional<Real> rel_l2_error;
  std::optional<Real> true_residual;  // recomputed at the returned iterate
  std::string message;

  Real final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

nlohmann::json to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const nlohmann::json& j);

void write_report_json(const std::filesystem::path& path, const ConvergenceReport& r);
/// Two columns: iteration,relative_residual
void write_history_csv(const std::filesystem::path& path, const ConvergenceReport& r);

/// ||u - u_ref||_2 / ||u_ref||_2
Real relative_l2(std::span<const Complex> u, std::span<const Complex> u_ref);

}  // namespace helm
