#pragma once

/// \file seed_switch.hpp
/// \brief Promoting an unsolved shift to seed once the current seed has
/// converged, keeping the Krylov subspace built so far.
///
/// Switching from seed s to seed t at iteration n needs only scalars:
///   r_n^(t)        = r_n / pi_n^(s,t)
///   alpha_k^(t)    = (pi_k^(s,t) / pi_{k+1}^(s,t)) alpha_k,        k < n
///   beta_k^(t)     = (pi_k^(s,t) / pi_{k+1}^(s,t))^2 beta_k,       k < n
///   pi_k^(t,i)     = R_k^(t)(sigma_t - sigma_i), re-run from the rebased scalars.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "scocg/cocg.hpp"
#include "scocg/shifted_cocg.hpp"

namespace scocg {

enum class SwitchTrigger { SeedConverged, Stagnation, Forced };

inline const char* to_string(SwitchTrigger t) {
  switch (t) {
    case SwitchTrigger::SeedConverged: return "seed_converged";
    case SwitchTrigger::Stagnation: return "stagnation";
    case SwitchTrigger::Forced: return "forced";
  }
  return "unknown";
}

struct SwitchEvent {
  std::size_t iteration = 0;
  std::size_t old_seed = 0;
  std::size_t new_seed = 0;
  std::size_t unsolved_before = 0;  // unsolved systems, old seed included
  std::size_t unsolved_after = 0;   // unsolved systems, new seed included
  SwitchTrigger trigger = SwitchTrigger::SeedConverged;
  std::vector<double> true_residuals;  // relative true residual per shift, optional
};

/// Unsolved shifts ordered by estimated residual |r_n| / |pi_n|, largest
/// first; ties go to the lower index.
inline std::vector<std::size_t> rank_seed_candidates(std::span<const ShiftedSystemState> states,
                                                     double seed_residual_norm) {
  std::vector<std::size_t> idx;
  std::vector<double> res(states.size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].active()) continue;
    const double a = std::abs(states[i].pi_cur);
    res[i] = a > kPiVanishTol ? seed_residual_norm / a : HUGE_VAL;
    idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return res[a] > res[b]; });
  return idx;
}

/// argmax over unsolved shifts of |r_n^(i)|.
inline std::size_t select_new_seed(std::span<const ShiftedSystemState> states, double seed_residual_norm) {
  const auto ranked = rank_seed_candidates(states, seed_residual_norm);
  if (ranked.empty()) throw Error(ErrorCode::NoUnsolved, "select_new_seed: no unsolved system");
  return ranked.front();
}

struct RebasedSeedVectors {
  Vector r;     // r_n^(t)
  Vector p;     // p_n^(t), ready for the next matvec
  Complex beta; // beta_{n-1}^(t)
};

/// r^(t) = r / pi_n, beta^(t) = (pi_{n-1}/pi_n)^2 beta, p^(t) = r^(t) + beta^(t) p_prev^(t).
inline RebasedSeedVectors rebase_seed_vectors(std::span<const Complex> r, Complex pi_cur, Complex beta_prev,
                                              Complex pi_prev, std::span<const Complex> p_prev) {
  require_pi_nonzero(pi_cur, "rebase_seed_vectors");
  RebasedSeedVectors out;
  out.r = scaled(Complex(1.0, 0.0) / pi_cur, r);
  out.beta = shifted_beta(pi_prev, pi_cur, beta_prev);
  out.p.assign(p_prev.begin(), p_prev.end());
  axpby(Complex(1.0, 0.0), out.r, out.beta, out.p);
  return out;
}

/// Scalar history the new seed's own COCG would have produced.
///
/// `pis` is pi_0^(s,t)..pi_n^(s,t) with n = history.steps().
inline SeedScalarHistory rebase_history(const SeedScalarHistory& history, std::span<const Complex> pis) {
  const std::size_t n = history.steps();
  if (pis.size() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "rebase_history: need " + std::to_string(n + 1) +
                                                  " pi values, got " + std::to_string(pis.size()));
  }
  for (const Complex& pi : pis) require_pi_nonzero(pi, "rebase_history");

  SeedScalarHistory out;
  out.alphas.resize(n);
  out.betas.resize(history.betas.size());
  for (std::size_t k = 0; k < n; ++k) out.alphas[k] = pis[k] / pis[k + 1] * history.alphas[k];
  for (std::size_t k = 0; k < history.betas.size(); ++k) {
    const Complex ratio = pis[k] / pis[k + 1];
    out.betas[k] = ratio * ratio * history.betas[k];
  }
  out.residual_norms.resize(history.residual_norms.size());
  for (std::size_t k = 0; k < history.residual_norms.size() && k < pis.size(); ++k) {
    out.residual_norms[k] = history.residual_norms[k] / std::abs(pis[k]);
  }
  return out;
}

struct PiTable {
  std::vector<Complex> log;  // pi_0..pi_n
  bool vanished = false;     // pi_{n-1} or pi_n is a root
};

/// pi_0..pi_n for one shift against the seed whose scalars are `h`.
inline PiTable pi_sequence(const SeedScalarHistory& h, Complex sigma_rel) {
  PiTable t;
  const std::size_t n = h.steps();
  t.log.reserve(n + 1);
  t.log.push_back(Complex(1.0, 0.0));
  Complex prev(1.0, 0.0);
  Complex cur(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    const Complex next = pi_update(prev, cur, h.alpha(kk), h.alpha(kk - 1), h.beta(kk - 1), sigma_rel);
    t.log.push_back(next);
    prev = cur;
    cur = next;
  }
  t.vanished = !(std::abs(cur) > kPiVanishTol) || !(std::abs(prev) > kPiVanishTol);
  return t;
}

/// Re-derives pi tables for the given relative shifts (sigma_i - sigma_t)
/// against the rebased history. Scalars only.
inline std::vector<PiTable> recompute_shift_tables(const SeedScalarHistory& rebased,
                                                   std::span<const Complex> sigma_rel) {
  std::vector<PiTable> out;
  out.reserve(sigma_rel.size());
  for (const Complex& s : sigma_rel) out.push_back(pi_sequence(rebased, s));
  return out;
}

}  // namespace scocg
