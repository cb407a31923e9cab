// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/grf.hpp>
#include <helm/helmholtz.hpp>

#include <filesystem>
#include <json.hpp>

namespace helm {

/// GRF parameters without a grid or seed.
struct GrfParams {
  Real mean = 0.0;
  Real s = 1.0;
  Real l = 0.1;
  std::optional<Real> min_reject;
};

nlohmann::json to_json(const GrfParams& p);
GrfParams grf_params_from_json(const nlohmann::json& j, const GrfParams& defaults);

/// Problem description as read from JSON:
/// {
///   "dim": 2, "m": 33, "seed": 1,
///   "k": {"mean": 6, "s": 0.5, "l": 0.3, "min_reject": 3} | {"constant": 6},
///   "k_target_mean": 12,                      (optional rescaling of k)
///   "k_resample": false,                      (resample with the target mean instead)
///   "f": "zero" | {"re": {grf}, "im": {grf}},
///   "g": "zero" | {"sin": 3} | {grf},
///   "scatterer": [{"type": "cube", "center": [..], "side": 0.25}, ...],
///   "boundary": {"top": "neumann", "left": "sommerfeld", ...}
/// }
/// Missing entries take the 2D defaults (square 0.25 scatterer,
/// g = sin(3 pi x), f = 0) or the 3D defaults (cube 0.125, GRF g).
ProblemSpec problem_from_json(const nlohmann::json& j);
ProblemSpec load_problem(const std::filesystem::path& path);

Shape shape_from_json(const nlohmann::json& j);

/// Default scattering problem used by tests, acceptance runs and benches.
nlohmann::json default_problem_json(int dim, Index m, std::uint64_t seed = 1);

/// Independent stream ids for the fields of one problem or sample.
enum class FieldStream : std::uint64_t { k = 1, g = 2, f_re = 3, f_im = 4 };

}  // namespace helm
