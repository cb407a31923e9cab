// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/deeponet.hpp>
#include <helm/dense.hpp>
#include <helm/helmholtz.hpp>
#include <helm/preconditioner.hpp>
#include <helm/relaxation.hpp>

#include <cstdint>
#include <optional>

namespace helm {

enum class TbSelection : std::uint8_t { natural, random, custom };

/// Coarse space spanned by selected trunk-basis columns.
///   Q: orthonormalized columns (prolongation), R = Q^T,
///   A_c = Q^T A Q, factored by dense LU.
struct TbCoarseSpace {
  RealMatrix q;
  ComplexMatrix ac;
  DenseLu lu;
  std::vector<Index> selection;

  Index size() const { return q.cols; }
};

struct TbOptions {
  Index s = 32;
  TbSelection selection = TbSelection::natural;
  std::uint64_t seed = 0;        // random selection
  std::vector<Index> columns;    // custom selection
  Index coarse_dim_cap = kDefaultCoarseDimCap;
};

/// Column indices chosen from a p-column trunk matrix.
std::vector<Index> select_columns(Index p, const TbOptions& opt);

/// Builds the coarse space from an explicit basis matrix T (n x p).
TbCoarseSpace build_tb(const RealMatrix& t, const ComplexCsrMatrix& a, const TbOptions& opt);

/// Builds the coarse space from trunk outputs at the system's grid nodes.
TbCoarseSpace build_tb(const DeepOnetWeights& w, const AssembledSystem& sys, const TbOptions& opt);

/// Q A_c^{-1} Q^T r
ComplexVector coarse_apply(const TbCoarseSpace& cs, std::span<const Complex> r);
void coarse_apply(const TbCoarseSpace& cs, std::span<const Complex> r, std::span<Complex> z);

enum class TwoLevelMode : std::uint8_t { multiplicative, additive };

/// Linear two-level preconditioner built on a coarse space and an optional
/// linear smoother M1:
///   multiplicative  z = M1 r;  z += C(r - A z);  z += M1(r - A z)
///   additive        z = M1 r + C r
/// where C is coarse_apply. Without a smoother both modes reduce to C.
class TwoLevelPreconditioner final : public Preconditioner {
 public:
  TwoLevelPreconditioner(std::shared_ptr<const TbCoarseSpace> cs, const ComplexCsrMatrix& a,
                         PreconditionerPtr smoother, TwoLevelMode mode);

  using Preconditioner::apply;
  void apply(std::span<const Complex> r, std::span<Complex> z) const override;
  bool linear() const override { return true; }
  std::string name() const override { return "tb"; }

  const TbCoarseSpace& coarse_space() const { return *cs_; }

 private:
  std::shared_ptr<const TbCoarseSpace> cs_;
  const ComplexCsrMatrix* a_;
  PreconditionerPtr smoother_;
  TwoLevelMode mode_;
};

/// Smoother choices for the two-level preconditioner.
struct TbSmootherSpec {
  enum class Kind : std::uint8_t { none, relaxation, ilu0 } kind = Kind::relaxation;
  RelaxationSpec relaxation{RelaxationKind::jacobi, 2.0 / 3.0, 1};  // one damped Jacobi sweep
};

PreconditionerPtr make_smoother(const ComplexCsrMatrix& a, const TbSmootherSpec& spec);

PreconditionerPtr two_level_preconditioner(std::shared_ptr<const TbCoarseSpace> cs, const ComplexCsrMatrix& a,
                                           const TbSmootherSpec& smoother = {},
                                           TwoLevelMode mode = TwoLevelMode::multiplicative);

/// Synthetic stand-ins for a trained trunk: tensor-product modes
/// prod_d phi_{j_d}(x_d) ordered by increasing total frequency |j|².
///   sine    phi_j(x) = sin((j + 1) π x)
///   cosine  phi_j(x) = cos(j π x)
enum class SyntheticBasis : std::uint8_t { sine, cosine };
RealMatrix synthetic_basis(const StructuredGrid& g, Index count, SyntheticBasis kind = SyntheticBasis::sine);

/// Q (f64, [n, s]), A_c real and imaginary parts ([s, s]) and the selection.
TensorContainer tb_to_container(const TbCoarseSpace& cs);

}  // namespace helm
