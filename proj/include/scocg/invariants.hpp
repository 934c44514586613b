#pragma once

/// \file invariants.hpp
/// \brief Self-checks run by `scocg check`: each compares the shifted solver
/// against an independent route (direct COCG per shift, the residual
/// polynomial, dense LU) on a given matrix and shift list.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scocg/cocg.hpp"
#include "scocg/oracle.hpp"
#include "scocg/solve_family.hpp"

namespace scocg {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // largest observed relative deviation
  double tolerance = 0.0;
  std::string detail;
};

struct CheckTolerances {
  double symmetry = 1e-10;
  double collinearity = 1e-6;
  double pi_identity = 1e-10;
  double oracle_residual = 1e-8;
  std::size_t window = 20;
  std::size_t probe_shifts = 5;
};

namespace detail {

inline double rel_diff(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

/// Up to `count` shift indices spread over [0, m), seed excluded.
inline std::vector<std::size_t> probe_indices(std::size_t m, std::size_t seed, std::size_t count) {
  std::vector<std::size_t> out;
  if (m <= 1) return out;
  const std::size_t want = std::min(count, m - 1);
  for (std::size_t k = 0; k < want; ++k) {
    std::size_t i = want == 1 ? 0 : k * (m - 1) / (want - 1);
    if (i == seed) i = (i + 1) % m;
    if (std::find(out.begin(), out.end(), i) == out.end() && i != seed) out.push_back(i);
  }
  return out;
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_checks(const SparseSymmetricMatrix& a, const ShiftFamily& family,
                                                     const CheckTolerances& tol = {}) {
  std::vector<CheckResult> out;
  const std::size_t dim = a.dim();
  const std::size_t m = family.shifts.size();

  {
    CheckResult c{"bilinear_symmetry", true, 0.0, tol.symmetry, "u^T A v == v^T A u on 3 random pairs"};
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int t = 0; t < 3; ++t) {
      Vector u(dim), v(dim);
      for (auto& z : u) z = {g(rng), g(rng)};
      for (auto& z : v) z = {g(rng), g(rng)};
      Vector au(dim), av(dim);
      a.apply_uncounted({}, u, au);
      a.apply_uncounted({}, v, av);
      const Complex l = bilinear_form(u, av);
      const Complex r = bilinear_form(v, au);
      const double scale = norm2(u) * norm2(av) + 1e-300;
      c.worst = std::max(c.worst, std::abs(l - r) / scale);
    }
    c.pass = c.worst <= c.tolerance;
    out.push_back(c);
  }

  const auto probes = detail::probe_indices(m, family.seed, tol.probe_shifts);

  // Seed residuals and pi values inside the window, captured from the real driver.
  std::vector<Vector> seed_r;
  std::vector<std::vector<Complex>> pis(probes.size());
  std::vector<std::vector<bool>> live(probes.size());
  double pi_worst = 0.0;
  bool same_seed = true;
  FamilyOptions opts;
  opts.history = HistoryMode::None;
  opts.observer = [&](const IterationView& v) {
    if (v.seed != family.seed) same_seed = false;
    if (v.n > tol.window || !same_seed) return;
    seed_r.emplace_back(v.seed_residual.begin(), v.seed_residual.end());
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const auto& st = v.states[probes[k]];
      pis[k].push_back(st.pi_cur);
      live[k].push_back(st.active());
      if (st.active()) {
        const Complex ref = residual_polynomial_eval(*v.history, family.shifts[v.seed] - family.shifts[probes[k]], v.n);
        pi_worst = std::max(pi_worst, detail::rel_diff(st.pi_cur, ref));
      }
    }
  };
  const std::uint64_t mv0 = a.mv_count();
  FamilySolution sol = solve_family(a, family, opts);
  const std::uint64_t used = a.mv_count() - mv0;

  {
    CheckResult c{"collinearity", true, 0.0, tol.collinearity,
                  "|r_n - pi_n r_n^(i)| <= tol |r_n| against direct COCG, n <= " + std::to_string(tol.window)};
    for (std::size_t k = 0; k < probes.size(); ++k) {
      CocgState direct = cocg_init(a, family.shifts[probes[k]], family.b);
      for (std::size_t n = 0; n < seed_r.size(); ++n) {
        if (!live[k][n]) break;
        Vector diff = seed_r[n];
        axpy(-pis[k][n], direct.r, diff);
        const double rn = norm2(seed_r[n]);
        if (rn > 0.0) c.worst = std::max(c.worst, norm2(diff) / rn);
        if (cocg_step(direct, a) == StepResult::Breakdown) break;
      }
    }
    c.pass = c.worst <= c.tolerance;
    out.push_back(c);
  }

  out.push_back({"pi_residual_polynomial", pi_worst <= tol.pi_identity, pi_worst, tol.pi_identity,
                 "pi_n == R_n(sigma_s - sigma_i) from the seed history"});

  out.push_back({"mv_economy", used == sol.report.seed_iterations && used == sol.report.total_mvs,
                 static_cast<double>(used), static_cast<double>(sol.report.seed_iterations),
                 "matvecs " + std::to_string(used) + " vs seed iterations " +
                     std::to_string(sol.report.seed_iterations)});

  {
    CheckResult c{"recursive_vs_true_residual", true, 0.0, 100.0 * std::max(family.eps1, family.eps2),
                  "converged shifts: |true - recursive| relative residual"};
    for (const auto& s : sol.report.shifts) {
      if (s.status == ShiftStatus::Converged || s.status == ShiftStatus::ConvergedSuspect) {
        c.worst = std::max(c.worst, std::abs(s.true_residual - s.recursive_residual));
      }
    }
    c.pass = c.worst <= c.tolerance;
    out.push_back(c);
  }

  if (dim <= oracle::kDefaultCap) {
    CheckResult c{"dense_oracle", true, 0.0, tol.oracle_residual, "relative error against dense LU"};
    std::vector<std::size_t> idx = probes;
    idx.push_back(family.seed);
    for (std::size_t i : idx) {
      if (sol.report.shifts[i].status != ShiftStatus::Converged) continue;
      const Vector ref = oracle::dense_solve(oracle::DenseMatrix::from_sparse(a, family.shifts[i]), family.b);
      Vector diff = sol.x[i];
      axpy(Complex(-1.0, 0.0), ref, diff);
      const double scale = norm2(ref);
      if (scale > 0.0) c.worst = std::max(c.worst, norm2(diff) / scale);
    }
    c.pass = c.worst <= c.tolerance;
    out.push_back(c);
  }
  return out;
}

}  // namespace scocg
