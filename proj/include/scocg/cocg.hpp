#pragma once

/// \file cocg.hpp
/// \brief Conjugate Orthogonal Conjugate Gradient for (A + shift I) x = b.
///
/// The iteration is CG with the bilinear form u^T v in place of u^H v:
///
///     p_n     = r_n + beta_{n-1} p_{n-1}
///     alpha_n = r_n^T r_n / p_n^T (A + shift I) p_n
///     x_{n+1} = x_n + alpha_n p_n
///     r_{n+1} = r_n - alpha_n (A + shift I) p_n
///     beta_n  = r_{n+1}^T r_{n+1} / r_n^T r_n
///
/// The initial guess is always zero. The shifted solver depends on every
/// residual being a polynomial in the operator applied to b, which only
/// holds for x_0 = 0.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scocg/linalg.hpp"

namespace scocg {

/// Relative threshold below which a bilinear form is treated as vanished.
inline constexpr double kBreakdownTol = 1e-14;

/// Scalars generated by a COCG run, in iteration order.
///
/// After n steps: alphas = {alpha_0..alpha_{n-1}}, betas = {beta_0..beta_{n-1}},
/// residual_norms = {|r_0|..|r_n|}. alpha_{-1} = 1 and beta_{-1} = 0 are
/// implied and never stored.
struct SeedScalarHistory {
  std::vector<Complex> alphas;
  std::vector<Complex> betas;
  std::vector<double> residual_norms;

  std::size_t steps() const { return alphas.size(); }

  /// alpha_k with the alpha_{-1} = 1 convention.
  Complex alpha(std::ptrdiff_t k) const {
    return k < 0 ? Complex(1.0, 0.0) : alphas[static_cast<std::size_t>(k)];
  }
  /// beta_k with the beta_{-1} = 0 convention.
  Complex beta(std::ptrdiff_t k) const {
    return k < 0 ? Complex(0.0, 0.0) : betas[static_cast<std::size_t>(k)];
  }
};

enum class SolveStatus { Converged, MaxIter, Breakdown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Breakdown: return "breakdown";
  }
  return "unknown";
}

enum class StepResult { Advanced, Breakdown };

struct CocgState {
  std::size_t n = 0;
  Complex shift{};
  Vector x;
  Vector r;
  Vector p;
  Vector q;        // (A + shift I) p_n workspace
  Vector p_trial;  // candidate p_n, swapped in once the step is accepted
  Complex alpha_prev{1.0, 0.0};
  Complex beta_prev{0.0, 0.0};
  Complex rtr{};
  double b_norm = 0.0;
  SeedScalarHistory history;

  double residual_norm() const { return history.residual_norms.back(); }
};

inline CocgState cocg_init(const SparseSymmetricMatrix& a, Complex shift, std::span<const Complex> b) {
  detail::require_same_size(a.dim(), b.size(), "cocg_init");
  CocgState s;
  s.shift = shift;
  s.x.assign(b.size(), Complex{});
  s.r.assign(b.begin(), b.end());
  s.p.assign(b.size(), Complex{});
  s.q.assign(b.size(), Complex{});
  s.p_trial.assign(b.size(), Complex{});
  s.rtr = bilinear_form(s.r, s.r);
  s.b_norm = norm2(b);
  s.history.residual_norms.push_back(s.b_norm);
  return s;
}

/// Advances one COCG iteration with exactly one shifted matvec.
///
/// Returns Breakdown, leaving the state untouched, when either r_n^T r_n or
/// p_n^T (A + shift I) p_n is quasi-null relative to the squared norm.
inline StepResult cocg_step(CocgState& s, const SparseSymmetricMatrix& a) {
  const double rnorm = s.residual_norm();
  if (std::abs(s.rtr) <= kBreakdownTol * rnorm * rnorm) return StepResult::Breakdown;

  s.p_trial = s.p;
  axpby(Complex(1.0, 0.0), s.r, s.beta_prev, s.p_trial);
  a.shifted_matvec(s.shift, s.p_trial, s.q);
  const Complex pq = bilinear_form(s.p_trial, s.q);
  const double pnorm = norm2(s.p_trial);
  if (std::abs(pq) <= kBreakdownTol * pnorm * pnorm) return StepResult::Breakdown;

  std::swap(s.p, s.p_trial);
  const Complex alpha = s.rtr / pq;
  axpy(alpha, s.p, s.x);
  axpy(-alpha, s.q, s.r);
  const Complex rtr_next = bilinear_form(s.r, s.r);
  const Complex beta = rtr_next / s.rtr;

  s.history.alphas.push_back(alpha);
  s.history.betas.push_back(beta);
  s.history.residual_norms.push_back(norm2(s.r));
  s.alpha_prev = alpha;
  s.beta_prev = beta;
  s.rtr = rtr_next;
  ++s.n;
  return StepResult::Advanced;
}

struct CocgResult {
  Vector x;
  SeedScalarHistory history;
  SolveStatus status = SolveStatus::MaxIter;
  std::size_t iterations = 0;
};

/// max_iter == 0 selects the default of 4N.
inline CocgResult cocg_solve(const SparseSymmetricMatrix& a, Complex shift, std::span<const Complex> b,
                             double eps, std::size_t max_iter = 0) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "cocg_solve: eps must be positive");
  if (max_iter == 0) max_iter = 4 * a.dim();
  CocgState s = cocg_init(a, shift, b);
  CocgResult out;
  const double target = eps * s.b_norm;
  while (true) {
    if (s.residual_norm() <= target) {
      out.status = SolveStatus::Converged;
      break;
    }
    if (s.n >= max_iter) {
      out.status = SolveStatus::MaxIter;
      break;
    }
    if (cocg_step(s, a) == StepResult::Breakdown) {
      out.status = SolveStatus::Breakdown;
      break;
    }
  }
  out.iterations = s.n;
  out.x = std::move(s.x);
  out.history = std::move(s.history);
  return out;
}

/// R_n(lambda) from the three-term recurrence
///
///     R_0 = 1,  R_1 = 1 - alpha_0 lambda,
///     R_k = (1 + (beta_{k-2}/alpha_{k-2}) alpha_{k-1} - alpha_{k-1} lambda) R_{k-1}
///           - (beta_{k-2}/alpha_{k-2}) alpha_{k-1} R_{k-2}.
inline Complex residual_polynomial_eval(const SeedScalarHistory& h, Complex lambda, std::size_t n) {
  if (n > h.alphas.size() || (n >= 2 && n - 2 >= h.betas.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "residual_polynomial_eval: n = " + std::to_string(n) +
                                                " with " + std::to_string(h.alphas.size()) + " steps");
  }
  Complex prev(1.0, 0.0);  // R_{k-2}
  Complex cur(1.0, 0.0);   // R_{k-1}
  for (std::size_t k = 1; k <= n; ++k) {
    const auto km1 = static_cast<std::ptrdiff_t>(k) - 1;
    const Complex c = h.beta(km1 - 1) / h.alpha(km1 - 1) * h.alpha(km1);
    const Complex next = (1.0 + c - h.alpha(km1) * lambda) * cur - c * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace scocg
