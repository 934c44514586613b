#pragma once

/// \file solve_family.hpp
/// \brief Shifted COCG over a whole family, with optional seed switching.
///
/// One COCG iteration (one matvec) is run on the seed; every other unsolved
/// shift is advanced by shifted_system_step(). When the seed converges and
/// unsolved shifts remain, the worst of them becomes the new seed and the
/// iteration continues from the same step.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "scocg/cocg.hpp"
#include "scocg/linalg.hpp"
#include "scocg/seed_switch.hpp"
#include "scocg/shifted_cocg.hpp"

namespace scocg {

enum class HistoryMode { All, Final, None };

inline const char* to_string(HistoryMode h) {
  switch (h) {
    case HistoryMode::All: return "all";
    case HistoryMode::Final: return "final";
    case HistoryMode::None: return "none";
  }
  return "unknown";
}

enum class FamilyStatus { Converged, Partial, MaxIter, Breakdown, SwitchFailed };

inline const char* to_string(FamilyStatus s) {
  switch (s) {
    case FamilyStatus::Converged: return "converged";
    case FamilyStatus::Partial: return "partial";
    case FamilyStatus::MaxIter: return "max_iter";
    case FamilyStatus::Breakdown: return "breakdown";
    case FamilyStatus::SwitchFailed: return "switch_failed";
  }
  return "unknown";
}

/// Read-only view handed to FamilyOptions::observer at the top of every
/// iteration, before convergence marking. states[i].pi_log holds
/// pi_0..pi_n relative to `seed`.
struct IterationView {
  std::size_t n = 0;
  std::size_t seed = 0;
  std::span<const Complex> seed_residual;
  std::span<const ShiftedSystemState> states;
  const SeedScalarHistory* history = nullptr;
};

struct FamilyOptions {
  bool switching = true;
  /// Also switch when the seed residual drops less than stagnation_factor
  /// over stagnation_window iterations. Off by default.
  bool stagnation_switch = false;
  std::size_t stagnation_window = 200;
  double stagnation_factor = 10.0;
  std::size_t max_iter = 0;  // 0 -> 4N
  HistoryMode history = HistoryMode::All;
  unsigned threads = 1;
  /// True residuals of every shift at each switch (m uncounted products per switch).
  bool snapshot_true_residuals = false;
  /// Switch away from a still-unsolved seed at this iteration (0: never).
  std::size_t force_switch_at = 0;
  std::function<void(const IterationView&)> observer;
};

struct ShiftReport {
  Complex shift{};
  ShiftStatus status = ShiftStatus::Active;
  std::size_t iterations = 0;
  double recursive_residual = 0.0;  // relative, |r_n| / |pi_n| / |b|
  double true_residual = 0.0;       // relative, |b - (A + sigma I) x| / |b|
  std::vector<double> history;      // relative recursive residuals, one per iteration
};

struct FamilySolveReport {
  FamilyStatus status = FamilyStatus::Converged;
  std::uint64_t total_mvs = 0;          // products spent by the solve itself
  std::uint64_t verification_mvs = 0;   // final true-residual pass, not counted above
  std::size_t seed_iterations = 0;
  std::size_t initial_seed = 0;
  std::size_t final_seed = 0;
  bool stagnation_switch_used = false;
  double b_norm = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  std::vector<SwitchEvent> switches;
  std::vector<ShiftReport> shifts;
  double wall_time_seconds = 0.0;

  std::size_t converged_count() const {
    return static_cast<std::size_t>(std::count_if(shifts.begin(), shifts.end(), [](const ShiftReport& s) {
      return s.status == ShiftStatus::Converged || s.status == ShiftStatus::ConvergedSuspect;
    }));
  }
  bool all_converged() const { return converged_count() == shifts.size(); }
  std::vector<std::size_t> unsolved() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      if (shifts[i].status != ShiftStatus::Converged && shifts[i].status != ShiftStatus::ConvergedSuspect) {
        out.push_back(i);
      }
    }
    return out;
  }
};

struct FamilySolution {
  std::vector<Vector> x;
  FamilySolveReport report;
};

namespace detail {

inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2 * static_cast<std::size_t>(threads)) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t k = lo; k < hi; ++k) body(k);
    });
  }
}

inline double relative(double value, double b_norm) { return b_norm > 0.0 ? value / b_norm : value; }

inline double true_relative_residual(const SparseSymmetricMatrix& a, Complex shift, std::span<const Complex> b,
                                     std::span<const Complex> x, double b_norm) {
  Vector ax(b.size());
  a.apply_uncounted(shift, x, ax);
  for (std::size_t k = 0; k < ax.size(); ++k) ax[k] = b[k] - ax[k];
  return relative(norm2(ax), b_norm);
}

/// Mutable state of one solve_family() run.
class FamilyDriver {
 public:
  FamilyDriver(const SparseSymmetricMatrix& a, const ShiftFamily& family, const FamilyOptions& opts)
      : a_(a), fam_(family), opts_(opts), m_(family.shifts.size()), dim_(a.dim()) {
    if (m_ == 0) throw Error(ErrorCode::InvalidArgument, "solve_family: empty shift list");
    require_same_size(dim_, family.b.size(), "solve_family");
    if (family.seed >= m_) throw Error(ErrorCode::IndexOutOfRange, "solve_family: seed index");
    if (!(family.eps1 > 0.0) || !(family.eps2 > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "solve_family: eps1 and eps2 must be positive");
    }
    for (const Complex& s : family.shifts) {
      if (!is_finite(s)) throw Error(ErrorCode::InvalidArgument, "solve_family: non-finite shift");
    }
    max_iter_ = opts.max_iter == 0 ? 4 * dim_ : opts.max_iter;
    states_.assign(m_, ShiftedSystemState(dim_));
    seed_ = family.seed;
    r_.assign(family.b.begin(), family.b.end());
    q_.assign(dim_, Complex{});
    rtr_ = bilinear_form(r_, r_);
    b_norm_ = norm2(family.b);
    history_.residual_norms.push_back(b_norm_);
    report_.shifts.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) report_.shifts[i].shift = family.shifts[i];
    report_.initial_seed = seed_;
    report_.b_norm = b_norm_;
    report_.eps1 = family.eps1;
    report_.eps2 = family.eps2;
  }

  FamilySolution run() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t mv0 = a_.mv_count();
    FamilyStatus status = iterate();
    report_.total_mvs = a_.mv_count() - mv0;
    report_.seed_iterations = n_;
    report_.final_seed = seed_;
    finalize(status);
    report_.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    FamilySolution out;
    out.x.reserve(m_);
    for (auto& st : states_) out.x.push_back(std::move(st.x));
    out.report = std::move(report_);
    return out;
  }

 private:
  std::size_t active_count() const {
    return static_cast<std::size_t>(
        std::count_if(states_.begin(), states_.end(), [](const ShiftedSystemState& s) { return s.active(); }));
  }

  void record(std::size_t i, double rel) {
    auto& h = report_.shifts[i].history;
    if (opts_.history == HistoryMode::All) {
      h.push_back(rel);
    } else if (opts_.history == HistoryMode::Final) {
      h.assign(1, rel);
    }
  }

  // Marks every active shift whose residual estimate meets its tolerance.
  void mark_converged(double rnorm) {
    const double tol1 = fam_.eps1 * b_norm_;
    const double tol2 = fam_.eps2 * b_norm_;
    for (std::size_t i = 0; i < m_; ++i) {
      auto& st = states_[i];
      if (!st.active()) continue;
      const double res = i == seed_ ? rnorm : shifted_residual_norm(st, rnorm);
      record(i, relative(res, b_norm_));
      if (res <= (i == seed_ ? tol1 : tol2)) {
        st.status = ShiftStatus::Converged;
        st.iterations_at_solve = n_;
        st.residual_at_solve = res;
      }
    }
  }

  bool stagnating() const {
    if (!opts_.stagnation_switch) return false;
    const std::size_t w = opts_.stagnation_window;
    if (w == 0 || n_ < last_switch_ + w) return false;
    const auto& rn = history_.residual_norms;
    return rn[n_] * opts_.stagnation_factor > rn[n_ - w];
  }

  // Tries candidates in ranked order; false when every one has a vanished pi.
  bool switch_seed(SwitchTrigger trigger, std::size_t unsolved_before) {
    const double rnorm = history_.residual_norms.back();
    const auto ranked = rank_seed_candidates(states_, rnorm);
    for (const std::size_t cand : ranked) {
      if (cand == seed_) continue;
      const auto& cs = states_[cand];
      if (cs.pi_log.size() != n_ + 1) continue;
      const Complex pi_n = cs.pi_log[n_];
      const Complex pi_nm1 = n_ > 0 ? cs.pi_log[n_ - 1] : Complex(1.0, 0.0);
      if (!(std::abs(pi_n) > kPiVanishTol) || !(std::abs(pi_nm1) > kPiVanishTol)) continue;

      SeedScalarHistory rebased;
      try {
        rebased = rebase_history(history_, cs.pi_log);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::PiVanished) continue;
        throw;
      }

      std::vector<std::size_t> targets;
      std::vector<Complex> rel;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!states_[i].active()) continue;
        targets.push_back(i);
        rel.push_back(fam_.shifts[i] - fam_.shifts[cand]);
      }
      const auto tables = recompute_shift_tables(rebased, rel);

      auto vecs = rebase_seed_vectors(r_, pi_n, beta_prev_, pi_nm1, cs.p);
      r_ = std::move(vecs.r);
      rtr_ = bilinear_form(r_, r_);
      beta_prev_ = n_ > 0 ? rebased.betas[n_ - 1] : Complex(0.0, 0.0);
      alpha_prev_ = n_ > 0 ? rebased.alphas[n_ - 1] : Complex(1.0, 0.0);
      history_ = std::move(rebased);
      history_.residual_norms.back() = norm2(r_);
      states_[cand].p = std::move(vecs.p);
      direction_ready_ = true;

      for (std::size_t k = 0; k < targets.size(); ++k) {
        auto& st = states_[targets[k]];
        st.pi_log = tables[k].log;
        st.pi_cur = st.pi_log[n_];
        st.pi_prev = n_ > 0 ? st.pi_log[n_ - 1] : Complex(1.0, 0.0);
        st.pi_next = st.pi_cur;
        if (tables[k].vanished && targets[k] != cand) {
          st.status = ShiftStatus::PiVanished;
          st.iterations_at_solve = n_;
        }
      }

      SwitchEvent ev;
      ev.iteration = n_;
      ev.old_seed = seed_;
      ev.new_seed = cand;
      ev.unsolved_before = unsolved_before;
      ev.unsolved_after = active_count();
      ev.trigger = trigger;
      if (opts_.snapshot_true_residuals) {
        ev.true_residuals.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
          ev.true_residuals[i] = true_relative_residual(a_, fam_.shifts[i], fam_.b, states_[i].x, b_norm_);
        }
      }
      report_.switches.push_back(std::move(ev));
      if (trigger == SwitchTrigger::Stagnation) report_.stagnation_switch_used = true;
      seed_ = cand;
      last_switch_ = n_;
      return true;
    }
    return false;
  }

  FamilyStatus iterate() {
    while (true) {
      const double rnorm = history_.residual_norms.back();
      if (opts_.observer) opts_.observer(IterationView{n_, seed_, r_, states_, &history_});
      const std::size_t unsolved_before = active_count();
      mark_converged(rnorm);
      const std::size_t unsolved = active_count();
      if (unsolved == 0) return FamilyStatus::Converged;

      if (!states_[seed_].active()) {
        if (!opts_.switching) return FamilyStatus::Partial;
        if (!switch_seed(SwitchTrigger::SeedConverged, unsolved_before)) return FamilyStatus::SwitchFailed;
      } else if (unsolved > 1 && opts_.force_switch_at != 0 && n_ == opts_.force_switch_at) {
        switch_seed(SwitchTrigger::Forced, unsolved_before);
      } else if (unsolved > 1 && stagnating()) {
        switch_seed(SwitchTrigger::Stagnation, unsolved_before);
      }

      if (n_ >= max_iter_) return FamilyStatus::MaxIter;
      if (!seed_step()) return FamilyStatus::Breakdown;
    }
  }

  // One matvec on the seed plus scalar-driven updates of every other shift.
  bool seed_step() {
    const double rnorm = history_.residual_norms.back();
    if (std::abs(rtr_) <= kBreakdownTol * rnorm * rnorm) return false;

    auto& seed = states_[seed_];
    if (!direction_ready_) axpby(Complex(1.0, 0.0), r_, beta_prev_, seed.p);
    direction_ready_ = false;
    a_.shifted_matvec(fam_.shifts[seed_], seed.p, q_);
    const Complex pq = bilinear_form(seed.p, q_);
    const double pnorm = norm2(seed.p);
    if (std::abs(pq) <= kBreakdownTol * pnorm * pnorm) return false;
    const Complex alpha = rtr_ / pq;
    axpy(alpha, seed.p, seed.x);
    seed.last_alpha = alpha;
    seed.last_beta = beta_prev_;
    seed.pi_log.push_back(Complex(1.0, 0.0));

    std::vector<std::size_t> work;
    work.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != seed_ && states_[i].active()) work.push_back(i);
    }
    const Complex sigma_seed = fam_.shifts[seed_];
    parallel_for(work.size(), opts_.threads, [&](std::size_t k) {
      const std::size_t i = work[k];
      try {
        shifted_system_step(states_[i], r_, alpha, alpha_prev_, beta_prev_, fam_.shifts[i] - sigma_seed);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PiVanished) throw;
        states_[i].status = ShiftStatus::PiVanished;
        states_[i].iterations_at_solve = n_;
      }
    });

    axpy(-alpha, q_, r_);
    const Complex rtr_next = bilinear_form(r_, r_);
    const Complex beta = rtr_next / rtr_;
    history_.alphas.push_back(alpha);
    history_.betas.push_back(beta);
    history_.residual_norms.push_back(norm2(r_));
    alpha_prev_ = alpha;
    beta_prev_ = beta;
    rtr_ = rtr_next;
    ++n_;
    return true;
  }

  void finalize(FamilyStatus status) {
    for (std::size_t i = 0; i < m_; ++i) {
      auto& st = states_[i];
      auto& rep = report_.shifts[i];
      if (st.active()) {
        st.status = ShiftStatus::Unsolved;
        st.iterations_at_solve = n_;
        const double rnorm = history_.residual_norms.back();
        st.residual_at_solve = std::abs(st.pi_cur) > kPiVanishTol ? rnorm / std::abs(st.pi_cur) : HUGE_VAL;
      }
      rep.iterations = st.iterations_at_solve;
      rep.recursive_residual = relative(st.residual_at_solve, b_norm_);
      if (st.status == ShiftStatus::PiVanished) rep.recursive_residual = std::nan("");
      rep.true_residual = true_relative_residual(a_, fam_.shifts[i], fam_.b, st.x, b_norm_);
      if (st.status == ShiftStatus::Converged &&
          std::abs(rep.true_residual - rep.recursive_residual) > 100.0 * fam_.eps2) {
        st.status = ShiftStatus::ConvergedSuspect;
      }
      rep.status = st.status;
    }
    report_.verification_mvs = m_;
    report_.status = status == FamilyStatus::Converged && !report_.all_converged() ? FamilyStatus::Partial : status;
  }

  const SparseSymmetricMatrix& a_;
  const ShiftFamily& fam_;
  FamilyOptions opts_;
  std::size_t m_;
  std::size_t dim_;
  std::size_t max_iter_ = 0;
  std::vector<ShiftedSystemState> states_;
  std::size_t seed_ = 0;
  Vector r_;
  Vector q_;
  Complex rtr_{};
  Complex alpha_prev_{1.0, 0.0};
  Complex beta_prev_{0.0, 0.0};
  double b_norm_ = 0.0;
  bool direction_ready_ = false;
  std::size_t n_ = 0;
  std::size_t last_switch_ = 0;
  SeedScalarHistory history_;
  FamilySolveReport report_;
};

}  // namespace detail

/// Solves all of (A + family.shifts[k] I) x^(k) = family.b.
///
/// report.total_mvs equals report.seed_iterations: one matvec per seed
/// iteration whatever the number of shifts. Shifts are marked converged on
/// the recursive estimate |r_n| / |pi_n|; a final pass computes true
/// residuals and flags shifts whose two residuals disagree by more than
/// 100 * eps2 as converged_suspect.
inline FamilySolution solve_family(const SparseSymmetricMatrix& a, const ShiftFamily& family,
                                   const FamilyOptions& opts = {}) {
  detail::FamilyDriver driver(a, family, opts);
  return driver.run();
}

}  // namespace scocg
