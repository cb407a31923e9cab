// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace helm {

using Real = double;
using Complex = std::complex<double>;
using Index = std::size_t;

using RealVector = std::vector<Real>;
using ComplexVector = std::vector<Complex>;

// Error hierarchy. Every error raised by the library derives from helm::Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  using Error::Error;
};

struct CapacityError : Error {
  using Error::Error;
};

struct RankDeficientError : Error {
  RankDeficientError(const std::string& msg, Index column) : Error(msg), column(column) {}
  Index column;
};

struct FormatError : Error {
  using Error::Error;
};

struct BreakdownError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline Real norm2(std::span<const Complex> x) {
  // Scaled accumulation avoids overflow for the divergence-detection path.
  Real scale = 0.0, ssq = 1.0;
  for (const auto& v : x) {
    for (Real c : {v.real(), v.imag()}) {
      if (c != 0.0) {
        Real a = std::abs(c);
        if (scale < a) {
          ssq = 1.0 + ssq * (scale / a) * (scale / a);
          scale = a;
        } else {
          ssq += (a / scale) * (a / scale);
        }
      }
    }
  }
  return scale * std::sqrt(ssq);
}

inline Real norm2(std::span<const Real> x) {
  Real s = 0.0;
  for (Real v : x) s += v * v;
  return std::sqrt(s);
}

inline Real norm_inf(std::span<const Complex> x) {
  Real m = 0.0;
  for (const auto& v : x) m = std::max(m, std::abs(v));
  return m;
}

// Conjugated inner product <x, y> = sum conj(x_i) y_i.
inline Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s{0.0, 0.0};
  for (Index i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

// y += a * x
inline void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  for (Index i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

}  // namespace helm
