#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>

namespace ricci {

/// Solve the NxN linear system M * x = rhs in place by Gaussian elimination
/// with partial pivoting. Returns false on a (numerically) singular matrix.
template <std::size_t N>
bool solve_linear(std::array<std::array<double, N>, N> M,
                  std::array<double, N> rhs, std::array<double, N>& x) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
    if (M[piv][col] == 0.0 || !std::isfinite(M[piv][col])) return false;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < N; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = N; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < N; ++c) s -= M[i][c] * x[c];
    x[i] = s / M[i][i];
  }
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

template <std::size_t N>
struct NewtonOptions {
  double tol = 1e-12;        // sup-norm residual target
  int max_iter = 100;
  int max_backtrack = 40;    // step-halving limit per iteration
  // Rejects trial points outside the admissible set (e.g. positivity).
  std::function<bool(const std::array<double, N>&)> admissible;
};

template <std::size_t N>
struct NewtonResult {
  std::array<double, N> x{};
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <std::size_t N>
double sup_norm(const std::array<double, N>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::fabs(e));
  return m;
}

/// Damped Newton with step halving on residual increase. `fn` fills the
/// residual vector, `jac` the Jacobian (row i = dF_i/dx).
template <std::size_t N>
NewtonResult<N> newton_solve(
    const std::function<void(const std::array<double, N>&,
                             std::array<double, N>&)>& fn,
    const std::function<void(const std::array<double, N>&,
                             std::array<std::array<double, N>, N>&)>& jac,
    std::array<double, N> x0, const NewtonOptions<N>& opt = {}) {
  NewtonResult<N> res;
  res.x = x0;
  std::array<double, N> F;
  fn(res.x, F);
  res.residual = sup_norm(F);

  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    if (res.residual <= opt.tol) {
      res.converged = true;
      return res;
    }
    std::array<std::array<double, N>, N> J;
    jac(res.x, J);
    std::array<double, N> step;
    std::array<double, N> neg;
    for (std::size_t i = 0; i < N; ++i) neg[i] = -F[i];
    if (!solve_linear(J, neg, step)) return res;

    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= opt.max_backtrack; ++bt) {
      std::array<double, N> trial;
      for (std::size_t i = 0; i < N; ++i) trial[i] = res.x[i] + lambda * step[i];
      if (!opt.admissible || opt.admissible(trial)) {
        std::array<double, N> Ft;
        fn(trial, Ft);
        const double rt = sup_norm(Ft);
        if (std::isfinite(rt) && rt < res.residual) {
          res.x = trial;
          F = Ft;
          res.residual = rt;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) return res;
  }
  res.converged = res.residual <= opt.tol;
  return res;
}

}  // namespace ricci
