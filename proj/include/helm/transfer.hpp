// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/csr_matrix.hpp>
#include <helm/grid.hpp>

namespace helm {

/// Multilinear interpolation of a nodal field from one grid to the node
/// coordinates of another grid of the same dimension.
template <typename T>
std::vector<T> interpolate_field(std::span<const T> field, const StructuredGrid& from, const StructuredGrid& to);

/// Fine -> coarse. Pointwise injection on nested grids (m_f = 2 m_c - 1),
/// multilinear interpolation otherwise.
template <typename T>
std::vector<T> restrict_field(std::span<const T> fine, const StructuredGrid& fine_grid,
                              const StructuredGrid& coarse_grid);

/// Coarse -> fine by multilinear interpolation.
template <typename T>
std::vector<T> prolong_field(std::span<const T> coarse, const StructuredGrid& coarse_grid,
                             const StructuredGrid& fine_grid);

/// Assembled multilinear prolongation P (n_fine x n_coarse).
ComplexCsrMatrix prolongation_matrix(const StructuredGrid& coarse, const StructuredGrid& fine);

/// Full-weighting restriction (1/2^d) P^T for nested grids.
ComplexCsrMatrix full_weighting_matrix(const StructuredGrid& coarse, const StructuredGrid& fine);

inline bool nested(const StructuredGrid& fine, const StructuredGrid& coarse) {
  return fine.dim() == coarse.dim() && fine.nodes_per_axis() == 2 * coarse.nodes_per_axis() - 1;
}

}  // namespace helm
