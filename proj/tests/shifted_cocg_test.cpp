#include <gtest/gtest.h>

#include "test_support.hpp"

namespace scocg {
namespace {

using namespace std::complex_literals;

TEST(PiUpdate, ShiftEqualToSeedStaysOne) {
  EXPECT_EQ(pi_update(1.0, 1.0, 0.7 + 0.2i, 1.3, -0.4i, 0.0), Complex(1.0));
}

TEST(PiUpdate, FirstStepClosedForm) { EXPECT_EQ(pi_update(1.0, 1.0, 2.0, 1.0, 0.0, 0.5), Complex(2.0)); }

TEST(PiUpdate, MatchesResidualPolynomial) {
  const Complex pi1 = pi_update(1.0, 1.0, 1.0, 1.0, 0.0, 1.0);
  EXPECT_EQ(pi1, Complex(2.0));
  const Complex pi2 = pi_update(1.0, pi1, 1.0, 1.0, 1.0, 1.0);
  EXPECT_EQ(pi2, Complex(5.0));
  SeedScalarHistory h;
  h.alphas = {1.0, 1.0};
  h.betas = {1.0, 0.0};
  EXPECT_EQ(residual_polynomial_eval(h, -1.0, 2), pi2);
}

TEST(ShiftedAlpha, Examples) {
  EXPECT_EQ(shifted_alpha(1.0, 1.0, 0.3 - 0.1i), 0.3 - 0.1i);
  EXPECT_EQ(shifted_alpha(2.0, 4.0, 0.5), Complex(0.25));
  EXPECT_EQ(shifted_alpha(1.0 + 1.0i, 2.0, 2.0), 1.0 + 1.0i);
}

TEST(ShiftedAlpha, VanishedPi) {
  try {
    shifted_alpha(1.0, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PiVanished);
  }
}

TEST(ShiftedBeta, Examples) {
  EXPECT_EQ(shifted_beta(1.0, 1.0, 0.4i), 0.4i);
  EXPECT_EQ(shifted_beta(2.0, 1.0, 0.25), Complex(1.0));
  EXPECT_EQ(shifted_beta(1.0i, 1.0, 1.0), Complex(-1.0));
  EXPECT_THROW(shifted_beta(1.0, 1e-301, 1.0), Error);
}

TEST(ShiftedResidualNorm, Examples) {
  ShiftedSystemState st(1);
  EXPECT_EQ(shifted_residual_norm(st, 0.37), 0.37);
  st.pi_cur = 2.0;
  EXPECT_DOUBLE_EQ(shifted_residual_norm(st, 1e-6), 5e-7);
}

TEST(ShiftedSystemStep, FirstStepClosedForm) {
  ShiftedSystemState st(3);
  const Vector r0 = unit_vector(3, 0);
  const Complex alpha0 = 0.8 - 0.1i;
  const Complex sigma_rel = 0.25i;
  shifted_system_step(st, r0, alpha0, 1.0, 0.0, sigma_rel);
  const Complex pi1 = 1.0 + alpha0 * sigma_rel;
  EXPECT_EQ(st.p, r0);
  EXPECT_EQ(st.pi_cur, pi1);
  EXPECT_EQ(st.pi_prev, Complex(1.0));
  EXPECT_LE(testing::rel_err(st.x[0], alpha0 / pi1), 1e-15);
  EXPECT_EQ(st.x[1], Complex(0.0));
  EXPECT_EQ(st.pi_log.size(), 2u);
}

TEST(ShiftedSystemStep, VanishingPiLeavesVectorsUntouched) {
  ShiftedSystemState st(2);
  st.x = {1.0, 2.0};
  // pi_1 = 1 + alpha_0 sigma_rel = 0
  EXPECT_THROW(shifted_system_step(st, unit_vector(2, 0), 1.0, 1.0, 0.0, -1.0), Error);
  EXPECT_EQ(st.x, (Vector{1.0, 2.0}));
  EXPECT_EQ(st.p, Vector(2));
}

// Independent COCG on the shifted system, stepped alongside the seed.
struct Direct {
  CocgState s;
  Direct(const SparseSymmetricMatrix& a, Complex sigma, const Vector& b) : s(cocg_init(a, sigma, b)) {}
};

TEST(ShiftedSystemStep, AgreesWithDirectCocgOnEightByEight) {
  const auto a = testing::random_complex_symmetric(8, 0.4, 8);
  std::mt19937_64 rng(8);
  const Vector b = testing::random_vector(8, rng);
  const Complex sigma_s = 0.1;
  const Complex sigma_rel = 0.3 + 0.01i;

  CocgState seed = cocg_init(a, sigma_s, b);
  ShiftedSystemState st(8);
  Direct d(a, sigma_s + sigma_rel, b);
  for (int n = 0; n < 5; ++n) {
    const Vector r_n = seed.r;
    const Complex alpha_prev = seed.alpha_prev;
    const Complex beta_prev = seed.beta_prev;
    ASSERT_EQ(cocg_step(seed, a), StepResult::Advanced);
    shifted_system_step(st, r_n, seed.history.alphas.back(), alpha_prev, beta_prev, sigma_rel);
    ASSERT_EQ(cocg_step(d.s, a), StepResult::Advanced);
    EXPECT_LE(testing::rel_err(st.x, d.s.x), 1e-8) << "n = " << n;
    EXPECT_LE(testing::rel_err(st.last_alpha, d.s.history.alphas.back()), 1e-8);
    if (n > 0) {
      EXPECT_LE(testing::rel_err(st.last_beta, d.s.history.betas[n - 1]), 1e-8);
    }
  }
}

TEST(ShiftedSystemStep, SeedDuplicateReproducesSeedIterates) {
  const auto a = testing::random_complex_symmetric(30, 0.2, 30);
  std::mt19937_64 rng(30);
  const Vector b = testing::random_vector(30, rng);
  CocgState seed = cocg_init(a, 0.2i, b);
  ShiftedSystemState st(30);
  for (int n = 0; n < 12; ++n) {
    const Vector r_n = seed.r;
    const Complex alpha_prev = seed.alpha_prev;
    const Complex beta_prev = seed.beta_prev;
    ASSERT_EQ(cocg_step(seed, a), StepResult::Advanced);
    shifted_system_step(st, r_n, seed.history.alphas.back(), alpha_prev, beta_prev, 0.0);
    EXPECT_EQ(st.pi_cur, Complex(1.0));
    EXPECT_EQ(st.x, seed.x) << "n = " << n;
    EXPECT_EQ(st.p, seed.p);
  }
}

TEST(ShiftedResidualNorm, MatchesTrueResidual) {
  const auto a = testing::random_complex_symmetric(40, 0.15, 41);
  std::mt19937_64 rng(41);
  const Vector b = testing::random_vector(40, rng);
  const Complex sigma_s = 0.0;
  const Complex sigma_i = 0.45 + 0.02i;
  CocgState seed = cocg_init(a, sigma_s, b);
  ShiftedSystemState st(40);
  for (int n = 0; n < 15; ++n) {
    const Vector r_n = seed.r;
    const Complex alpha_prev = seed.alpha_prev;
    const Complex beta_prev = seed.beta_prev;
    ASSERT_EQ(cocg_step(seed, a), StepResult::Advanced);
    shifted_system_step(st, r_n, seed.history.alphas.back(), alpha_prev, beta_prev, sigma_i - sigma_s);
    const double est = shifted_residual_norm(st, seed.residual_norm());
    const double tru = testing::true_residual(a, sigma_i, b, st.x) * norm2(b);
    EXPECT_LE(std::abs(est - tru), 1e-8 * tru) << "n = " << n;
  }
}

TEST(PiSequence, EqualsResidualPolynomialOfSeed) {
  // Sign convention: pi for shift i is R_n^(s)(sigma_s - sigma_i), fed sigma_rel = sigma_i - sigma_s.
  const auto a = testing::random_complex_symmetric(50, 0.1, 50);
  std::mt19937_64 rng(50);
  const CocgResult r = cocg_solve(a, 0.0, testing::random_vector(50, rng), 1e-300, 30);
  const Complex sigma_s = 0.0;
  const Complex sigma_i = 0.3 - 0.2i;
  const PiTable t = pi_sequence(r.history, sigma_i - sigma_s);
  for (std::size_t n = 0; n <= r.history.steps(); ++n) {
    EXPECT_LE(testing::rel_err(t.log[n], residual_polynomial_eval(r.history, sigma_s - sigma_i, n)), 1e-12);
  }
  EXPECT_GT(testing::rel_err(t.log.back(), residual_polynomial_eval(r.history, sigma_i - sigma_s, 30)), 1e-3);
}

}  // namespace
}  // namespace scocg
