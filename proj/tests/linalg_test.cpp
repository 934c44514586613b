#include <gtest/gtest.h>

#include "test_support.hpp"

namespace scocg {
namespace {

using testing::diagonal;
using testing::identity;
using namespace std::complex_literals;

SparseSymmetricMatrix tridiag4() {
  return from_real_triplets(4, {{0, 1, -1.0}, {1, 0, -1.0}, {1, 2, -1.0}, {2, 1, -1.0}, {2, 3, -1.0}, {3, 2, -1.0}});
}

TEST(Matvec, Identity) {
  const Vector x{1.0, 2.0i, -1.0};
  EXPECT_EQ(matvec(identity(3), x), x);
}

TEST(Matvec, Diagonal) {
  EXPECT_EQ(matvec(diagonal({1.0, 2.0, 3.0}), Vector{1.0, 1.0, 1.0}), (Vector{1.0, 2.0, 3.0}));
}

TEST(Matvec, TridiagonalOnFirstUnitVector) {
  EXPECT_EQ(matvec(tridiag4(), unit_vector(4, 0)), (Vector{0.0, -1.0, 0.0, 0.0}));
}

TEST(Matvec, CountsEveryProduct) {
  const auto a = tridiag4();
  const Vector x = unit_vector(4, 2);
  EXPECT_EQ(a.mv_count(), 0u);
  a.matvec(x);
  a.shifted_matvec(1.0i, x);
  EXPECT_EQ(a.mv_count(), 2u);
  Vector y(4);
  a.apply_uncounted(0.0, x, y);
  EXPECT_EQ(a.mv_count(), 2u);
}

TEST(Matvec, DimensionMismatch) {
  try {
    matvec(identity(3), Vector(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(ShiftedMatvec, ZeroOperator) {
  const SparseSymmetricMatrix zero(2, {});
  EXPECT_EQ(shifted_matvec(zero, 2.0 + 1.0i, Vector{1.0, 0.0}), (Vector{2.0 + 1.0i, 0.0}));
}

TEST(ShiftedMatvec, IdentityPlusOne) {
  EXPECT_EQ(shifted_matvec(identity(2), 1.0, Vector{3.0, 4.0}), (Vector{6.0, 8.0}));
}

TEST(ShiftedMatvec, DiagonalImaginaryShift) {
  EXPECT_EQ(shifted_matvec(diagonal({1.0, 2.0}), 1.0i, Vector{1.0, 1.0}), (Vector{1.0 + 1.0i, 2.0 + 1.0i}));
}

TEST(ShiftedMatvec, EqualsMatvecPlusShiftedVector) {
  std::mt19937_64 rng(11);
  const auto a = testing::random_complex_symmetric(60, 0.1, 5);
  for (int t = 0; t < 5; ++t) {
    const Vector x = testing::random_vector(60, rng);
    const Complex sigma = testing::random_complex(rng);
    const Vector lhs = shifted_matvec(a, sigma, x);
    const Vector ax = matvec(a, x);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const Complex rhs = ax[k] + sigma * x[k];
      EXPECT_LE(std::abs(lhs[k] - rhs), 1e-15 * std::max(std::abs(rhs), std::abs(ax[k]) + std::abs(sigma * x[k])));
    }
  }
}

TEST(BilinearForm, IsUnconjugated) { EXPECT_EQ(bilinear_form(Vector{1.0i, 0.0}, Vector{1.0i, 0.0}), Complex(-1.0)); }

TEST(BilinearForm, RealDot) { EXPECT_EQ(bilinear_form(Vector{1.0, 2.0}, Vector{3.0, 4.0}), Complex(11.0)); }

TEST(BilinearForm, CancelsToZero) {
  EXPECT_EQ(bilinear_form(Vector{1.0 + 1.0i, 1.0}, Vector{1.0 - 1.0i, -2.0}), Complex(0.0));
}

TEST(BilinearForm, CommutesExactly) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Vector u = testing::random_vector(37, rng);
    const Vector v = testing::random_vector(37, rng);
    EXPECT_EQ(bilinear_form(u, v), bilinear_form(v, u));
  }
}

TEST(BilinearForm, MatrixIsSymmetricUnderForm) {
  std::mt19937_64 rng(4);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = testing::random_complex_symmetric(80, 0.08, 100 + s, -2.0, 2.0, 1.0);
    const Vector u = testing::random_vector(80, rng);
    const Vector v = testing::random_vector(80, rng);
    const Complex l = bilinear_form(u, matvec(a, v));
    const Complex r = bilinear_form(v, matvec(a, u));
    EXPECT_LE(std::abs(l - r), 1e-13 * std::abs(l));
  }
}

TEST(Norm2, Examples) {
  EXPECT_EQ(norm2(Vector(4)), 0.0);
  EXPECT_DOUBLE_EQ(norm2(Vector{3.0, 4.0i}), 5.0);
  EXPECT_DOUBLE_EQ(norm2(Vector{1.0 + 1.0i, 1.0 - 1.0i}), 2.0);
}

TEST(Norm2, MatchesHermitianSelfProduct) {
  std::mt19937_64 rng(9);
  const Vector v = testing::random_vector(50, rng);
  Complex h{};
  for (const Complex& z : v) h += std::conj(z) * z;
  EXPECT_EQ(h.imag(), 0.0);
  EXPECT_NEAR(norm2(v) * norm2(v), h.real(), 1e-13 * h.real());
}

TEST(SparseMatrix, RejectsAsymmetricValues) {
  try {
    SparseSymmetricMatrix(2, {{0, 1, 1.0}, {1, 0, 2.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SymmetryViolation);
  }
}

TEST(SparseMatrix, RejectsMissingPartner) {
  EXPECT_THROW(SparseSymmetricMatrix(3, {{0, 2, 1.0i}}), Error);
}

TEST(SparseMatrix, RejectsDuplicatesAndOutOfRange) {
  try {
    SparseSymmetricMatrix(2, {{0, 0, 1.0}, {0, 0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateEntry);
  }
  try {
    SparseSymmetricMatrix(2, {{2, 0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(SparseMatrix, CsrLayout) {
  const auto a = tridiag4();
  EXPECT_EQ(a.nnz(), 6u);
  const auto rp = a.row_ptr();
  EXPECT_TRUE(std::is_sorted(rp.begin(), rp.end()));
  for (std::size_t c : a.col_idx()) EXPECT_LT(c, 4u);
  EXPECT_TRUE(a.is_real());
  EXPECT_EQ(a.at(2, 1), Complex(-1.0));
  EXPECT_EQ(a.at(0, 3), Complex(0.0));
}

TEST(SparseMatrix, ScaledNegatesAndResetsCounter) {
  const auto a = tridiag4();
  a.matvec(unit_vector(4, 0));
  const auto b = a.scaled(-1.0);
  EXPECT_EQ(b.mv_count(), 0u);
  EXPECT_EQ(b.at(0, 1), Complex(1.0));
}

}  // namespace
}  // namespace scocg
