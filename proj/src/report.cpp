// SPDX-License-Identifier: Apache-2.0
#include <helm/report.hpp>

#include <fstream>
#include <iomanip>

namespace helm {

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["solver"] = r.solver;
  j["preconditioner"] = r.preconditioner;
  j["iterations"] = r.iterations;
  j["matvecs"] = r.matvecs;
  j["residual_history"] = r.residual_history;
  j["converged"] = r.converged;
  j["diverged"] = r.diverged;
  j["wall_time"] = r.wall_time;
  j["rel_l2_error"] = r.rel_l2_error ? nlohmann::json(*r.rel_l2_error) : nlohmann::json(nullptr);
  j["true_residual"] = r.true_residual ? nlohmann::json(*r.true_residual) : nlohmann::json(nullptr);
  j["message"] = r.message;
  return j;
}

ConvergenceReport report_from_json(const nlohmann::json& j) {
  ConvergenceReport r;
  r.solver = j.at("solver").get<std::string>();
  r.preconditioner = j.at("preconditioner").get<std::string>();
  r.iterations = j.at("iterations").get<Index>();
  r.matvecs = j.at("matvecs").get<Index>();
  r.residual_history = j.at("residual_history").get<RealVector>();
  r.converged = j.at("converged").get<bool>();
  r.diverged = j.value("diverged", false);
  r.wall_time = j.at("wall_time").get<Real>();
  if (j.contains("rel_l2_error") && !j["rel_l2_error"].is_null()) r.rel_l2_error = j["rel_l2_error"].get<Real>();
  if (j.contains("true_residual") && !j["true_residual"].is_null()) r.true_residual = j["true_residual"].get<Real>();
  r.message = j.value("message", "");
  return r;
}

void write_report_json(const std::filesystem::path& path, const ConvergenceReport& r) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << to_json(r).dump(2) << '\n';
}

void write_history_csv(const std::filesystem::path& path, const ConvergenceReport& r) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "iteration,relative_residual\n" << std::setprecision(17);
  for (Index i = 0; i < r.residual_history.size(); ++i) out << i << ',' << r.residual_history[i] << '\n';
}

Real relative_l2(std::span<const Complex> u, std::span<const Complex> u_ref) {
  require(u.size() == u_ref.size(), "relative_l2: length mismatch");
  const Real ref = norm2(u_ref);
  if (!(ref > 0.0)) throw Error("relative_l2: reference has zero norm");
  ComplexVector d(u.size());
  for (Index i = 0; i < u.size(); ++i) d[i] = u[i] - u_ref[i];
  return norm2(d) / ref;
}

}  // namespace helm
