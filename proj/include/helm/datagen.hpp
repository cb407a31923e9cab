// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/problem_config.hpp>
#include <helm/tensor_container.hpp>

#include <functional>

namespace helm {

struct DatasetSpec {
  int dim = 2;
  Index m = 33;
  Index n = 5000;
  GrfParams k{6.0, 0.5, 0.3, 3.0};
  GrfParams g{0.0, 1.0, 0.1, std::nullopt};
  GrfParams f_re{0.0, 1.0, 0.1, std::nullopt};
  GrfParams f_im{0.0, 1.0, 0.1, std::nullopt};
  std::uint64_t seed = 0;
  /// Homogeneous incoming-wave data (g = 0).
  bool homogeneous_g = false;
  /// 0 means HELM_THREADS or the hardware concurrency.
  Index threads = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static DatasetSpec from_json(const nlohmann::json& j);
  /// Default sampling parameters per dimension (k: s = 0.5 in 2D, 0.2 in 3D).
  static DatasetSpec defaults(int dim);
};

struct DatasetSample {
  RealVector k, f_re, f_im, g, u_re, u_im;
  Index k_rejections = 0;
};

/// Draws (k, f, g) for sample `index`, solves the non-scattering problem
/// directly and checks ||rhs - A u|| / ||rhs|| <= 1e-10.
DatasetSample generate_sample(const DatasetSpec& spec, Index index);

/// All samples, in parallel over indices. Output is independent of the
/// thread count. Tensors (f64): k, f_re, f_im, u_re, u_im [N, m, ..., m],
/// g [N, m, ..., m] over the top face.
TensorContainer generate_dataset(const DatasetSpec& spec,
                                 const std::function<void(Index done, Index total)>& progress = {});

/// Effective worker count: requested, else HELM_THREADS, else hardware.
Index worker_count(Index requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Exceptions
/// from any worker are rethrown (the one with the smallest index).
void parallel_for(Index n, Index threads, const std::function<void(Index)>& body);

/// The non-scattering problem of one dataset sample.
ProblemSpec sample_problem(const DatasetSpec& spec, const DatasetSample& s);

}  // namespace helm
