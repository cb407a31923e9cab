// SPDX-License-Identifier: Apache-2.0
#include <helm/solvers.hpp>

#include <chrono>
#include <cmath>

namespace helm {

namespace {

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
  return std::chrono::duration<Real>(Clock::now() - t0).count();
}

void check_square(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const char* who) {
  if (!a.square() || a.nrows() != rhs.size())
    throw DimensionError(std::string(who) + ": matrix/rhs dimension mismatch");
}

void check_linear(const Preconditioner* m, const SolveControl& c, const char* who) {
  if (m && !m->linear() && !c.flexible)
    throw ConfigError(std::string(who) + ": preconditioner '" + m->name() +
                      "' is nonlinear; enable flexible mode to use it inside a Krylov method");
}

Real true_relative_residual(const ComplexCsrMatrix& a, std::span<const Complex> rhs, std::span<const Complex> u,
                            Real bnorm) {
  ComplexVector r(rhs.size());
  a.residual(rhs, u, r);
  return norm2(r) / bnorm;
}

// Shared stationary-iteration bookkeeping.
struct Stationary {
  const ComplexCsrMatrix& a;
  std::span<const Complex> rhs;
  const SolveControl& control;
  Real bnorm;
  ComplexVector u, r, z;
  ConvergenceReport report;

  Stationary(const ComplexCsrMatrix& a_, std::span<const Complex> rhs_, const SolveControl& c)
      : a(a_), rhs(rhs_), control(c), bnorm(norm2(rhs_)), u(rhs_.size()), r(rhs_.begin(), rhs_.end()),
        z(rhs_.size()) {
    report.residual_history.push_back(bnorm > 0.0 ? 1.0 : 0.0);
  }

  // Applies u += M(r), refreshes r; returns true when the run must stop.
  bool step(const Preconditioner& m) {
    m.apply(r, z);
    for (Index i = 0; i < u.size(); ++i) u[i] += z[i];
    a.residual(rhs, u, r);
    ++report.matvecs;
    ++report.iterations;
    const Real rel = norm2(r) / bnorm;
    report.residual_history.push_back(rel);
    if (rel <= control.tol) {
      report.converged = true;
      return true;
    }
    if (!(rel <= control.divergence_threshold)) {
      report.diverged = true;
      report.message = "diverged: relative residual exceeded threshold";
      return true;
    }
    return report.iterations >= control.max_iters;
  }
};

}  // namespace

SolveResult richardson(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner& m,
                       const SolveControl& control) {
  check_square(a, rhs, "richardson");
  const auto t0 = Clock::now();
  Stationary st(a, rhs, control);
  st.report.solver = "richardson";
  st.report.preconditioner = m.name();
  if (st.bnorm == 0.0) {
    st.report.converged = true;
  } else {
    while (st.report.iterations < control.max_iters && !st.step(m)) {
    }
  }
  st.report.true_residual = st.bnorm > 0.0 ? true_relative_residual(a, rhs, st.u, st.bnorm) : 0.0;
  st.report.wall_time = seconds_since(t0);
  return {std::move(st.u), std::move(st.report)};
}

SolveResult hybrid_richardson(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner& m1,
                              const Preconditioner& m2, Index n_r, const SolveControl& control) {
  check_square(a, rhs, "hybrid_richardson");
  if (n_r < 1) throw ConfigError("hybrid_richardson: n_r must be >= 1");
  const auto t0 = Clock::now();
  Stationary st(a, rhs, control);
  st.report.solver = "hybrid_richardson";
  st.report.preconditioner = m1.name() + "+" + m2.name();
  if (st.bnorm == 0.0) {
    st.report.converged = true;
  } else {
    bool done = false;
    while (!done && st.report.iterations < control.max_iters) {
      for (Index s = 0; s < n_r && !done; ++s) done = st.step(m1);
      if (!done) done = st.step(m2);
    }
  }
  st.report.true_residual = st.bnorm > 0.0 ? true_relative_residual(a, rhs, st.u, st.bnorm) : 0.0;
  st.report.wall_time = seconds_since(t0);
  return {std::move(st.u), std::move(st.report)};
}

SolveResult gmres(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner* m,
                  const SolveControl& control) {
  check_square(a, rhs, "gmres");
  check_linear(m, control, "gmres");
  if (control.restart < 1) throw ConfigError("gmres: restart must be >= 1");
  const auto t0 = Clock::now();
  const Index n = rhs.size();
  const Index k = control.restart;

  ConvergenceReport rep;
  rep.solver = control.flexible ? "fgmres" : "gmres";
  rep.preconditioner = m ? m->name() : "none";
  ComplexVector x(n);
  const Real bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history = {0.0};
    rep.true_residual = 0.0;
    return {std::move(x), std::move(rep)};
  }

  ComplexVector r(rhs.begin(), rhs.end());
  Real beta = bnorm;
  rep.residual_history.push_back(1.0);

  std::vector<ComplexVector> v(k + 1, ComplexVector(n));
  std::vector<ComplexVector> z(k, ComplexVector(n));
  std::vector<ComplexVector> h(k + 1, ComplexVector(k));  // h[row][col]
  RealVector cs(k);
  ComplexVector sn(k), g(k + 1);
  ComplexVector w(n);

  auto fail = [&](const std::string& why) {
    rep.wall_time = seconds_since(t0);
    rep.message = why;
    throw KrylovBreakdown("gmres: " + why, rep);
  };

  while (true) {
    for (Index i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), Complex{});
    g[0] = beta;
    Index cols = 0;
    bool stop_cycle = false;
    for (Index j = 0; j < k && !stop_cycle; ++j) {
      if (m) {
        m->apply(v[j], z[j]);
      } else {
        z[j] = v[j];
      }
      a.matvec(z[j], w);
      ++rep.matvecs;
      for (Index i = 0; i <= j; ++i) h[i][j] = Complex{};
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i <= j; ++i) {
          const Complex c = dot(v[i], w);
          h[i][j] += c;
          axpy(-c, v[i], w);
        }
      }
      const Real hn = norm2(w);
      if (!std::isfinite(hn)) fail("non-finite value in Arnoldi recurrence");
      // Apply previous rotations to the new column.
      for (Index i = 0; i < j; ++i) {
        const Complex t0v = h[i][j], t1v = h[i + 1][j];
        h[i][j] = cs[i] * t0v + sn[i] * t1v;
        h[i + 1][j] = -std::conj(sn[i]) * t0v + cs[i] * t1v;
      }
      const Complex aa = h[j][j];
      const Real nu = std::hypot(std::abs(aa), hn);
      if (nu == 0.0) fail("zero Hessenberg column");
      if (std::abs(aa) == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
        h[j][j] = hn;
      } else {
        const Complex phase = aa / std::abs(aa);
        cs[j] = std::abs(aa) / nu;
        sn[j] = phase * hn / nu;
        h[j][j] = phase * nu;
      }
      h[j + 1][j] = Complex{};
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];
      cols = j + 1;
      ++rep.iterations;
      const Real rel = std::abs(g[j + 1]) / bnorm;
      if (!std::isfinite(rel)) fail("non-finite residual estimate");
      rep.residual_history.push_back(rel);
      if (rel <= control.tol || hn == 0.0 || rep.iterations >= control.max_iters) {
        stop_cycle = true;
      } else {
        for (Index i = 0; i < n; ++i) v[j + 1][i] = w[i] / hn;
      }
    }
    // Back substitution for y and update x += Z y.
    ComplexVector y(cols);
    for (Index i = cols; i-- > 0;) {
      Complex s = g[i];
      for (Index c = i + 1; c < cols; ++c) s -= h[i][c] * y[c];
      y[i] = s / h[i][i];
    }
    for (Index c = 0; c < cols; ++c) axpy(y[c], z[c], x);

    a.residual(rhs, x, r);
    ++rep.matvecs;
    beta = norm2(r);
    const Real true_rel = beta / bnorm;
    if (true_rel <= control.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= control.max_iters) break;
    if (beta == 0.0) break;
  }
  rep.true_residual = beta / bnorm;
  rep.wall_time = seconds_since(t0);
  return {std::move(x), std::move(rep)};
}

SolveResult bicgstab(const ComplexCsrMatrix& a, std::span<const Complex> rhs, const Preconditioner* m,
                     const SolveControl& control) {
  check_square(a, rhs, "bicgstab");
  check_linear(m, control, "bicgstab");
  const auto t0 = Clock::now();
  const Index n = rhs.size();
  ConvergenceReport rep;
  rep.solver = "bicgstab";
  rep.preconditioner = m ? m->name() : "none";
  ComplexVector x(n);
  const Real bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history = {0.0};
    rep.true_residual = 0.0;
    return {std::move(x), std::move(rep)};
  }
  auto precond = [&](std::span<const Complex> in, std::span<Complex> out) {
    if (m) {
      m->apply(in, out);
    } else {
      std::copy(in.begin(), in.end(), out.begin());
    }
  };
  auto fail = [&](const std::string& why) {
    rep.wall_time = seconds_since(t0);
    rep.message = why;
    rep.true_residual = true_relative_residual(a, rhs, x, bnorm);
    throw KrylovBreakdown("bicgstab: " + why, rep);
  };

  ComplexVector r(rhs.begin(), rhs.end()), rhat(r), p(n), v(n), phat(n), s(n), shat(n), t(n);
  rep.residual_history.push_back(1.0);
  Complex rho_prev{1.0}, alpha{1.0}, omega{1.0};
  bool fresh = true;

  while (rep.iterations < control.max_iters) {
    const Complex rho = dot(rhat, r);
    if (std::abs(rho) == 0.0 || !std::isfinite(std::abs(rho))) fail("rho breakdown");
    if (fresh) {
      p = r;
      fresh = false;
    } else {
      const Complex beta = (rho / rho_prev) * (alpha / omega);
      for (Index i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    precond(p, phat);
    a.matvec(phat, v);
    ++rep.matvecs;
    const Complex rv = dot(rhat, v);
    if (std::abs(rv) == 0.0) fail("alpha breakdown");
    alpha = rho / rv;
    for (Index i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    const Real snorm = norm2(s) / bnorm;
    if (snorm <= control.tol) {
      axpy(alpha, phat, x);
      ++rep.iterations;
      rep.residual_history.push_back(snorm);
    } else {
      precond(s, shat);
      a.matvec(shat, t);
      ++rep.matvecs;
      const Real tt = std::real(dot(t, t));
      if (tt == 0.0) fail("omega breakdown (t = 0)");
      omega = dot(t, s) / tt;
      if (std::abs(omega) == 0.0) fail("omega breakdown");
      for (Index i = 0; i < n; ++i) {
        x[i] += alpha * phat[i] + omega * shat[i];
        r[i] = s[i] - omega * t[i];
      }
      ++rep.iterations;
      const Real rel = norm2(r) / bnorm;
      if (!std::isfinite(rel)) fail("non-finite residual");
      rep.residual_history.push_back(rel);
      rho_prev = rho;
      if (rel > control.tol) continue;
    }
    // Recurrence says converged: confirm with the true residual, restart otherwise.
    a.residual(rhs, x, r);
    ++rep.matvecs;
    const Real true_rel = norm2(r) / bnorm;
    if (true_rel <= control.tol) {
      rep.converged = true;
      break;
    }
    rhat = r;
    fresh = true;
    rho_prev = alpha = omega = Complex{1.0};
  }
  rep.true_residual = true_relative_residual(a, rhs, x, bnorm);
  rep.wall_time = seconds_since(t0);
  return {std::move(x), std::move(rep)};
}

}  // namespace helm
