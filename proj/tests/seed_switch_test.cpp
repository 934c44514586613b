#include <gtest/gtest.h>

#include "test_support.hpp"

namespace scocg {
namespace {

using namespace std::complex_literals;

// States whose estimated residual |r| / |pi| is given; inf marks a solved shift.
std::vector<ShiftedSystemState> states_with_residuals(const std::vector<double>& res) {
  std::vector<ShiftedSystemState> out(res.size(), ShiftedSystemState(1));
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (std::isinf(res[i])) {
      out[i].status = ShiftStatus::Converged;
    } else {
      out[i].pi_cur = 1.0 / res[i];
    }
  }
  return out;
}

constexpr double kSolved = HUGE_VAL;

TEST(SelectNewSeed, Argmax) {
  const auto st = states_with_residuals({kSolved, kSolved, 0.1, kSolved, kSolved, 0.5, kSolved, 0.3});
  EXPECT_EQ(select_new_seed(st, 1.0), 5u);
}

TEST(SelectNewSeed, SingleUnsolved) {
  const auto st = states_with_residuals({kSolved, 0.2, kSolved});
  EXPECT_EQ(select_new_seed(st, 1.0), 1u);
}

TEST(SelectNewSeed, TieGoesToLowerIndex) {
  auto st = states_with_residuals(std::vector<double>(10, kSolved));
  st[3] = ShiftedSystemState(1);
  st[9] = ShiftedSystemState(1);
  st[3].pi_cur = 2.0;
  st[9].pi_cur = -2.0;
  EXPECT_EQ(select_new_seed(st, 1.0), 3u);
}

TEST(SelectNewSeed, NoUnsolved) {
  const auto st = states_with_residuals({kSolved, kSolved});
  try {
    select_new_seed(st, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoUnsolved);
  }
}

TEST(RankSeedCandidates, FallbackOrder) {
  const auto st = states_with_residuals({0.2, kSolved, 0.9, 0.4});
  EXPECT_EQ(rank_seed_candidates(st, 1.0), (std::vector<std::size_t>{2, 3, 0}));
}

TEST(RebaseSeedVectors, IdenticalShiftIsNoOp) {
  const Vector r{1.0, 2.0i};
  const Vector p{0.5, -1.0};
  const auto out = rebase_seed_vectors(r, 1.0, 0.3, 1.0, p);
  EXPECT_EQ(out.r, r);
  EXPECT_EQ(out.beta, Complex(0.3));
  EXPECT_EQ(out.p, (Vector{1.0 + 0.3 * 0.5, 2.0i - 0.3}));
}

TEST(RebaseSeedVectors, EqualRatioKeepsBeta) {
  const auto out = rebase_seed_vectors(Vector{4.0}, 2.0, 0.7i, 2.0, Vector{1.0});
  EXPECT_EQ(out.beta, 0.7i);
  EXPECT_EQ(out.r, Vector{2.0});
  EXPECT_THROW(rebase_seed_vectors(Vector{4.0}, 0.0, 0.7i, 2.0, Vector{1.0}), Error);
}

TEST(RebaseHistory, Examples) {
  SeedScalarHistory h;
  h.alphas = {2.0};
  h.betas = {0.5};
  h.residual_norms = {1.0, 0.5};
  const std::vector<Complex> pis{1.0, 2.0};
  const auto out = rebase_history(h, pis);
  EXPECT_EQ(out.alphas, std::vector<Complex>{1.0});
  EXPECT_EQ(out.residual_norms[1], 0.25);

  const std::vector<Complex> ones{1.0, 1.0};
  const auto same = rebase_history(h, ones);
  EXPECT_EQ(same.alphas, h.alphas);
  EXPECT_EQ(same.betas, h.betas);
  EXPECT_THROW(rebase_history(h, std::vector<Complex>{1.0}), Error);
  EXPECT_THROW(rebase_history(h, std::vector<Complex>{1.0, 0.0}), Error);
}

struct Instance {
  SparseSymmetricMatrix a;
  Vector b;
  CocgResult seed_run;
};

Instance random_instance(std::uint64_t seed, std::size_t steps, Complex sigma_s) {
  Instance in{testing::random_complex_symmetric(50, 0.1, seed), {}, {}};
  std::mt19937_64 rng(seed);
  in.b = testing::random_vector(50, rng);
  in.seed_run = cocg_solve(in.a, sigma_s, in.b, 1e-300, steps);
  return in;
}

TEST(RebaseHistory, RatioIdentityThroughResidualPolynomial) {
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Complex sigma_s = 0.1;
    const Complex sigma_t = 0.6 + 0.001i;
    const Complex sigma_i = 0.35 - 0.05i;
    const auto in = random_instance(200 + k, 12, sigma_s);
    const auto& h = in.seed_run.history;
    const PiTable st = pi_sequence(h, sigma_t - sigma_s);
    const PiTable si = pi_sequence(h, sigma_i - sigma_s);
    const SeedScalarHistory rebased = rebase_history(h, st.log);
    for (std::size_t n = 0; n <= h.steps(); ++n) {
      const Complex lhs = residual_polynomial_eval(rebased, sigma_t - sigma_i, n);
      EXPECT_LE(testing::rel_err(lhs, si.log[n] / st.log[n]), 1e-10) << "n = " << n;
    }
    // The old seed seen from the new one is 1 / pi^(s,t).
    const auto back = recompute_shift_tables(rebased, std::vector<Complex>{sigma_s - sigma_t, 0.0});
    for (std::size_t n = 0; n <= h.steps(); ++n) {
      EXPECT_LE(testing::rel_err(back[0].log[n], 1.0 / st.log[n]), 1e-10);
      EXPECT_EQ(back[1].log[n], Complex(1.0));
    }
  }
}

TEST(RebaseHistory, MatchesFreshCocgOnNewSeed) {
  const Complex sigma_s = 0.0;
  const Complex sigma_t = 0.4 + 0.01i;
  const auto in = random_instance(7, 10, sigma_s);
  const auto fresh = cocg_solve(in.a, sigma_t, in.b, 1e-300, 10);
  const PiTable st = pi_sequence(in.seed_run.history, sigma_t - sigma_s);
  const SeedScalarHistory rebased = rebase_history(in.seed_run.history, st.log);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_LE(testing::rel_err(rebased.alphas[k], fresh.history.alphas[k]), 1e-8);
    EXPECT_LE(testing::rel_err(rebased.betas[k], fresh.history.betas[k]), 1e-8);
  }
}

TEST(RebaseSeedVectors, ContinuedIterationMatchesFreshRun) {
  // Run the seed for n steps, rebase onto shift t, then keep iterating COCG on
  // shift t and compare with COCG run on shift t from scratch.
  const auto a = testing::random_complex_symmetric(8, 0.4, 88);
  std::mt19937_64 rng(88);
  const Vector b = testing::random_vector(8, rng);
  const Complex sigma_s = 0.2;
  const Complex sigma_t = 0.9 + 0.05i;
  const std::size_t n = 3;

  CocgState seed = cocg_init(a, sigma_s, b);
  ShiftedSystemState t(8);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector r_k = seed.r;
    const Complex ap = seed.alpha_prev;
    const Complex bp = seed.beta_prev;
    ASSERT_EQ(cocg_step(seed, a), StepResult::Advanced);
    shifted_system_step(t, r_k, seed.history.alphas.back(), ap, bp, sigma_t - sigma_s);
  }
  const SeedScalarHistory rebased = rebase_history(seed.history, t.pi_log);
  const auto v = rebase_seed_vectors(seed.r, t.pi_cur, seed.beta_prev, t.pi_prev, t.p);

  CocgState cont = cocg_init(a, sigma_t, b);
  cont.n = n;
  cont.x = t.x;
  cont.r = v.r;
  cont.p = t.p;
  cont.beta_prev = v.beta;
  cont.alpha_prev = rebased.alphas.back();
  cont.rtr = bilinear_form(v.r, v.r);
  cont.history = rebased;
  cont.history.residual_norms.back() = norm2(v.r);

  CocgState fresh = cocg_init(a, sigma_t, b);
  for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(cocg_step(fresh, a), StepResult::Advanced);
  EXPECT_LE(testing::rel_err(cont.r, fresh.r), 1e-7);
  for (std::size_t k = n; k < 8; ++k) {
    ASSERT_EQ(cocg_step(cont, a), StepResult::Advanced);
    ASSERT_EQ(cocg_step(fresh, a), StepResult::Advanced);
    EXPECT_LE(norm2([&] {
                Vector d = cont.r;
                axpy(Complex(-1.0), fresh.r, d);
                return d;
              }()),
              1e-7 * norm2(b))
        << "k = " << k;
    EXPECT_LE(testing::rel_err(cont.x, fresh.x), 1e-7);
  }
  // Krylov dimension 8 reached on an 8x8 matrix.
  EXPECT_LE(norm2(cont.r), 1e-7 * norm2(b));
}

TEST(RecomputeShiftTables, NewSeedGetsOnes) {
  const auto in = random_instance(3, 6, 0.0);
  const PiTable st = pi_sequence(in.seed_run.history, 0.2);
  const auto rebased = rebase_history(in.seed_run.history, st.log);
  const auto tables = recompute_shift_tables(rebased, std::vector<Complex>{0.0});
  for (const Complex& pi : tables[0].log) EXPECT_EQ(pi, Complex(1.0));
  EXPECT_FALSE(tables[0].vanished);
}

}  // namespace
}  // namespace scocg
