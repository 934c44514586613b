#pragma once

/// \file shifted_cocg.hpp
/// \brief Scalar recurrences that carry one COCG seed iteration over to every
/// other shift of the family (A + sigma_i I) x = b.
///
/// With x_0 = 0 the residual of shift i is collinear with the seed residual,
/// r_n = pi_n r_n^(i), and pi_n = R_n(sigma_s - sigma_i) where R_n is the
/// seed's residual polynomial. Knowing pi_{n-1}, pi_n, pi_{n+1} yields the
/// shifted alpha and beta, so each shift costs two vector updates per
/// iteration and no matvec.
///
/// Throughout, sigma_rel = sigma_i - sigma_s.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scocg/cocg.hpp"
#include "scocg/linalg.hpp"

namespace scocg {

/// |pi| at or below this is treated as a root of the residual polynomial.
inline constexpr double kPiVanishTol = 1e-300;

enum class ShiftStatus { Active, Converged, ConvergedSuspect, Unsolved, PiVanished };

inline const char* to_string(ShiftStatus s) {
  switch (s) {
    case ShiftStatus::Active: return "active";
    case ShiftStatus::Converged: return "converged";
    case ShiftStatus::ConvergedSuspect: return "converged_suspect";
    case ShiftStatus::Unsolved: return "unsolved";
    case ShiftStatus::PiVanished: return "pi_vanished";
  }
  return "unknown";
}

/// The family (A + shifts[k] I) x^(k) = b solved from one seed.
struct ShiftFamily {
  std::vector<Complex> shifts;
  Vector b;
  std::size_t seed = 0;
  double eps1 = 1e-12;
  double eps2 = 1e-12;
};

/// Per-shift iterate, direction and collinearity factors.
///
/// pi_log holds pi_0..pi_n relative to the current seed; it is rewritten
/// wholesale whenever the seed changes.
struct ShiftedSystemState {
  Vector x;
  Vector p;
  Complex pi_prev{1.0, 0.0};
  Complex pi_cur{1.0, 0.0};
  Complex pi_next{1.0, 0.0};
  ShiftStatus status = ShiftStatus::Active;
  std::size_t iterations_at_solve = 0;
  double residual_at_solve = 0.0;
  Complex last_alpha{};  // alpha_n^(i) of the most recent step
  Complex last_beta{};   // beta_{n-1}^(i) of the most recent step
  std::vector<Complex> pi_log{Complex(1.0, 0.0)};

  explicit ShiftedSystemState(std::size_t dim = 0) : x(dim), p(dim) {}

  bool active() const { return status == ShiftStatus::Active; }
};

/// pi_{n+1} = (1 + c + alpha_n sigma_rel) pi_n - c pi_{n-1},
/// c = (beta_{n-1} / alpha_{n-1}) alpha_n.
///
/// Evaluated as pi_n + c (pi_n - pi_{n-1}) + alpha_n sigma_rel pi_n, which
/// is algebraically identical and keeps pi == 1 exact when sigma_rel == 0.
inline Complex pi_update(Complex pi_prev, Complex pi_cur, Complex alpha_n, Complex alpha_prev,
                         Complex beta_prev, Complex sigma_rel) {
  const Complex c = beta_prev / alpha_prev * alpha_n;
  return pi_cur + c * (pi_cur - pi_prev) + alpha_n * sigma_rel * pi_cur;
}

inline void require_pi_nonzero(Complex pi, const char* where) {
  if (!(std::abs(pi) > kPiVanishTol)) {
    throw Error(ErrorCode::PiVanished, std::string(where) + ": |pi| <= 1e-300");
  }
}

/// alpha_n^(i) = (pi_n / pi_{n+1}) alpha_n
inline Complex shifted_alpha(Complex pi_cur, Complex pi_next, Complex alpha_n) {
  require_pi_nonzero(pi_next, "shifted_alpha");
  return pi_cur / pi_next * alpha_n;
}

/// beta_{n-1}^(i) = (pi_{n-1} / pi_n)^2 beta_{n-1}
inline Complex shifted_beta(Complex pi_prev, Complex pi_cur, Complex beta_prev) {
  require_pi_nonzero(pi_cur, "shifted_beta");
  const Complex ratio = pi_prev / pi_cur;
  return ratio * ratio * beta_prev;
}

/// |r_n^(i)| = |r_n| / |pi_n|, without forming r_n^(i).
inline double shifted_residual_norm(const ShiftedSystemState& state, double seed_residual_norm) {
  require_pi_nonzero(state.pi_cur, "shifted_residual_norm");
  return seed_residual_norm / std::abs(state.pi_cur);
}

/// One iteration of a non-seed shift, driven by the seed residual r_n and
/// the seed scalars alpha_n, alpha_{n-1}, beta_{n-1}. No matvec.
///
/// Throws PiVanished before modifying any vector.
inline void shifted_system_step(ShiftedSystemState& st, std::span<const Complex> r_n, Complex alpha_n,
                                Complex alpha_prev, Complex beta_prev, Complex sigma_rel) {
  const Complex pi_next = pi_update(st.pi_prev, st.pi_cur, alpha_n, alpha_prev, beta_prev, sigma_rel);
  const Complex beta_i = shifted_beta(st.pi_prev, st.pi_cur, beta_prev);
  const Complex alpha_i = shifted_alpha(st.pi_cur, pi_next, alpha_n);

  direction_and_update(Complex(1.0, 0.0) / st.pi_cur, r_n, beta_i, st.p, alpha_i, st.x);

  st.pi_next = pi_next;
  st.pi_prev = st.pi_cur;
  st.pi_cur = pi_next;
  st.last_alpha = alpha_i;
  st.last_beta = beta_i;
  st.pi_log.push_back(pi_next);
}

}  // namespace scocg
