// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <helm/band_lu.hpp>
#include <helm/csr_matrix.hpp>
#include <helm/ilu0.hpp>

#include <functional>
#include <memory>
#include <string>

namespace helm {

/// An approximate inverse z = M(r). apply(0) = 0 for every implementation;
/// linear() promises M(a r1 + b r2) = a M(r1) + b M(r2).
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;

  virtual void apply(std::span<const Complex> r, std::span<Complex> z) const = 0;
  virtual bool linear() const = 0;
  virtual std::string name() const = 0;

  ComplexVector apply(std::span<const Complex> r) const {
    ComplexVector z(r.size());
    apply(r, z);
    return z;
  }
};

using PreconditionerPtr = std::shared_ptr<const Preconditioner>;

class IdentityPreconditioner final : public Preconditioner {
 public:
  using Preconditioner::apply;
  void apply(std::span<const Complex> r, std::span<Complex> z) const override {
    std::copy(r.begin(), r.end(), z.begin());
  }
  bool linear() const override { return true; }
  std::string name() const override { return "none"; }
};

class ZeroPreconditioner final : public Preconditioner {
 public:
  using Preconditioner::apply;
  void apply(std::span<const Complex>, std::span<Complex> z) const override {
    std::fill(z.begin(), z.end(), Complex{});
  }
  bool linear() const override { return true; }
  std::string name() const override { return "zero"; }
};

/// Exact inverse through a band LU factorization.
class DirectPreconditioner final : public Preconditioner {
 public:
  using Preconditioner::apply;
  explicit DirectPreconditioner(const ComplexCsrMatrix& a) : lu_(BandLuFactorization::factor(a)) {}
  explicit DirectPreconditioner(BandLuFactorization lu) : lu_(std::move(lu)) {}
  void apply(std::span<const Complex> r, std::span<Complex> z) const override {
    std::copy(r.begin(), r.end(), z.begin());
    lu_.solve_in_place(z);
  }
  bool linear() const override { return true; }
  std::string name() const override { return "direct"; }

 private:
  BandLuFactorization lu_;
};

class Ilu0Preconditioner final : public Preconditioner {
 public:
  using Preconditioner::apply;
  explicit Ilu0Preconditioner(const ComplexCsrMatrix& a) : ilu_(Ilu0Factorization::factor(a)) {}
  void apply(std::span<const Complex> r, std::span<Complex> z) const override { ilu_.apply(r, z); }
  bool linear() const override { return true; }
  std::string name() const override { return "ilu0"; }

 private:
  Ilu0Factorization ilu_;
};

/// Wraps an arbitrary callable; used by the bindings and tests.
class FunctionPreconditioner final : public Preconditioner {
 public:
  using Preconditioner::apply;
  using Fn = std::function<void(std::span<const Complex>, std::span<Complex>)>;
  FunctionPreconditioner(Fn fn, bool is_linear, std::string name)
      : fn_(std::move(fn)), linear_(is_linear), name_(std::move(name)) {}
  void apply(std::span<const Complex> r, std::span<Complex> z) const override { fn_(r, z); }
  bool linear() const override { return linear_; }
  std::string name() const override { return name_; }

 private:
  Fn fn_;
  bool linear_;
  std::string name_;
};

}  // namespace helm
