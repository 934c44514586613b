#pragma once

/// \file linalg.hpp
/// \brief Complex vectors, the unconjugated bilinear form and a CSR matrix
/// for complex symmetric operators.
///
/// COCG replaces the Hermitian inner product of CG by the bilinear form
/// u^T v (no conjugation). Every routine here that combines two vectors
/// uses that form; the only place conjugation appears is norm2().

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "scocg/errors.hpp"

namespace scocg {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
  }
}

// Plain real/imag arithmetic. std::complex operator* goes through the
// C99 Annex G NaN recovery path, which dominates the per-shift updates.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace detail

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// u^T v without conjugation of either argument.
inline Complex bilinear_form(std::span<const Complex> u, std::span<const Complex> v) {
  detail::require_same_size(u.size(), v.size(), "bilinear_form");
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    re += u[k].real() * v[k].real() - u[k].imag() * v[k].imag();
    im += u[k].real() * v[k].imag() + u[k].imag() * v[k].real();
  }
  return {re, im};
}

/// Euclidean norm sqrt(sum |v_k|^2).
inline double norm2(std::span<const Complex> v) {
  double sum = 0.0;
  for (const Complex& z : v) sum += z.real() * z.real() + z.imag() * z.imag();
  return std::sqrt(sum);
}

/// y <- a*x + y
inline void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  detail::require_same_size(x.size(), y.size(), "axpy");
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    y[k] = Complex(y[k].real() + ar * xr - ai * xi, y[k].imag() + ar * xi + ai * xr);
  }
}

/// y <- a*x + b*y
inline void axpby(Complex a, std::span<const Complex> x, Complex b, std::span<Complex> y) {
  detail::require_same_size(x.size(), y.size(), "axpby");
  const double ar = a.real();
  const double ai = a.imag();
  const double br = b.real();
  const double bi = b.imag();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    const double yr = y[k].real();
    const double yi = y[k].imag();
    y[k] = Complex((ar * xr - ai * xi) + (br * yr - bi * yi), (ar * xi + ai * xr) + (br * yi + bi * yr));
  }
}

/// p <- s*r + b*p, then x <- x + a*p, in one pass. Element-wise identical
/// to axpby() followed by axpy().
inline void direction_and_update(Complex s, std::span<const Complex> r, Complex b, std::span<Complex> p, Complex a,
                                 std::span<Complex> x) {
  detail::require_same_size(r.size(), p.size(), "direction_and_update");
  detail::require_same_size(r.size(), x.size(), "direction_and_update");
  const double sr = s.real(), si = s.imag();
  const double br = b.real(), bi = b.imag();
  const double ar = a.real(), ai = a.imag();
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double rr = r[k].real();
    const double ri = r[k].imag();
    const double pr0 = p[k].real();
    const double pi0 = p[k].imag();
    const double pr = (sr * rr - si * ri) + (br * pr0 - bi * pi0);
    const double pi = (sr * ri + si * rr) + (br * pi0 + bi * pr0);
    p[k] = Complex(pr, pi);
    x[k] = Complex(x[k].real() + ar * pr - ai * pi, x[k].imag() + ar * pi + ai * pr);
  }
}

inline Vector scaled(Complex a, std::span<const Complex> x) {
  Vector out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = detail::mul(a, x[k]);
  return out;
}

inline Vector unit_vector(std::size_t n, std::size_t j) {
  if (j >= n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "unit vector index " + std::to_string(j) + " for dimension " + std::to_string(n));
  }
  Vector e(n, Complex(0.0, 0.0));
  e[j] = Complex(1.0, 0.0);
  return e;
}

/// Coordinate entry used to assemble a SparseSymmetricMatrix.
struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value{};
};

/// Complex symmetric N x N matrix with the full pattern in CSR storage.
///
/// Symmetry (A == A^T, exact in both pattern and value) is checked on
/// construction. Every product through matvec()/shifted_matvec() bumps a
/// counter owned by the matrix, so solvers cannot under-report their cost.
/// apply_uncounted() exists for verification passes that must not be billed
/// to the solver.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;

  /// Builds from coordinate entries. Duplicate (row, col) pairs are rejected.
  SparseSymmetricMatrix(std::size_t dim, std::vector<Triplet> entries) : dim_(dim) {
    for (const Triplet& t : entries) {
      if (t.row >= dim || t.col >= dim) {
        throw Error(ErrorCode::IndexOutOfRange, "entry (" + std::to_string(t.row) + ", " +
                                                    std::to_string(t.col) + ") outside " +
                                                    std::to_string(dim) + "x" + std::to_string(dim));
      }
      if (!is_finite(t.value)) {
        throw Error(ErrorCode::InvalidArgument, "non-finite matrix entry");
      }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    row_ptr_.assign(dim + 1, 0);
    col_idx_.reserve(entries.size());
    values_.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k > 0 && entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col) {
        throw Error(ErrorCode::DuplicateEntry, "duplicate entry (" + std::to_string(entries[k].row) +
                                                   ", " + std::to_string(entries[k].col) + ")");
      }
      ++row_ptr_[entries[k].row + 1];
      col_idx_.push_back(entries[k].col);
      values_.push_back(entries[k].value);
    }
    for (std::size_t i = 0; i < dim; ++i) row_ptr_[i + 1] += row_ptr_[i];
    validate_symmetry();
  }

  SparseSymmetricMatrix(const SparseSymmetricMatrix& other)
      : dim_(other.dim_),
        row_ptr_(other.row_ptr_),
        col_idx_(other.col_idx_),
        values_(other.values_),
        mv_count_(other.mv_count_.load()) {}

  SparseSymmetricMatrix& operator=(const SparseSymmetricMatrix& other) {
    if (this != &other) {
      dim_ = other.dim_;
      row_ptr_ = other.row_ptr_;
      col_idx_ = other.col_idx_;
      values_ = other.values_;
      mv_count_.store(other.mv_count_.load());
    }
    return *this;
  }

  SparseSymmetricMatrix(SparseSymmetricMatrix&& other) noexcept
      : dim_(other.dim_),
        row_ptr_(std::move(other.row_ptr_)),
        col_idx_(std::move(other.col_idx_)),
        values_(std::move(other.values_)),
        mv_count_(other.mv_count_.load()) {}

  SparseSymmetricMatrix& operator=(SparseSymmetricMatrix&& other) noexcept {
    dim_ = other.dim_;
    row_ptr_ = std::move(other.row_ptr_);
    col_idx_ = std::move(other.col_idx_);
    values_ = std::move(other.values_);
    mv_count_.store(other.mv_count_.load());
    return *this;
  }

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return values_.size(); }
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const Complex> values() const { return values_; }

  /// True when every stored value has zero imaginary part.
  bool is_real() const {
    return std::all_of(values_.begin(), values_.end(), [](Complex v) { return v.imag() == 0.0; });
  }

  /// Entry (i, j), zero when not stored.
  Complex at(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw Error(ErrorCode::IndexOutOfRange, "at()");
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return {};
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
  }

  /// Matrix with every value multiplied by c (same pattern, fresh counter).
  SparseSymmetricMatrix scaled(Complex c) const {
    SparseSymmetricMatrix out(*this);
    for (Complex& v : out.values_) v = detail::mul(c, v);
    out.mv_count_.store(0);
    return out;
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, col_idx_[k], values_[k]});
    }
    return out;
  }

  /// y <- (A + shift I) x. Counted.
  void shifted_matvec(Complex shift, std::span<const Complex> x, std::span<Complex> y) const {
    apply_uncounted(shift, x, y);
    mv_count_.fetch_add(1, std::memory_order_relaxed);
  }

  Vector shifted_matvec(Complex shift, std::span<const Complex> x) const {
    Vector y(dim_);
    shifted_matvec(shift, x, y);
    return y;
  }

  void matvec(std::span<const Complex> x, std::span<Complex> y) const { shifted_matvec(Complex{}, x, y); }

  Vector matvec(std::span<const Complex> x) const { return shifted_matvec(Complex{}, x); }

  /// (A + shift I) x without touching the MV counter.
  void apply_uncounted(Complex shift, std::span<const Complex> x, std::span<Complex> y) const {
    detail::require_same_size(dim_, x.size(), "matvec");
    detail::require_same_size(dim_, y.size(), "matvec");
    for (std::size_t i = 0; i < dim_; ++i) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        const Complex a = values_[k];
        const Complex v = x[col_idx_[k]];
        re += a.real() * v.real() - a.imag() * v.imag();
        im += a.real() * v.imag() + a.imag() * v.real();
      }
      if (shift != Complex{}) {
        re += shift.real() * x[i].real() - shift.imag() * x[i].imag();
        im += shift.real() * x[i].imag() + shift.imag() * x[i].real();
      }
      y[i] = Complex(re, im);
    }
  }

  std::uint64_t mv_count() const { return mv_count_.load(); }
  void reset_mv_count() const { mv_count_.store(0); }

 private:
  void validate_symmetry() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        const std::size_t j = col_idx_[k];
        if (j == i) continue;
        if (at(j, i) != values_[k]) {
          throw Error(ErrorCode::SymmetryViolation,
                      "A(" + std::to_string(i) + ", " + std::to_string(j) + ") != A(" +
                          std::to_string(j) + ", " + std::to_string(i) + ")");
        }
      }
    }
  }

  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<Complex> values_;
  mutable std::atomic<std::uint64_t> mv_count_{0};
};

inline Vector matvec(const SparseSymmetricMatrix& a, std::span<const Complex> x) { return a.matvec(x); }

/// (A + shift I) x without materializing A + shift I.
inline Vector shifted_matvec(const SparseSymmetricMatrix& a, Complex shift, std::span<const Complex> x) {
  return a.shifted_matvec(shift, x);
}

/// Promotes a real symmetric matrix given as triplets to complex storage.
inline SparseSymmetricMatrix from_real_triplets(std::size_t dim,
                                                const std::vector<std::tuple<std::size_t, std::size_t, double>>& entries) {
  std::vector<Triplet> t;
  t.reserve(entries.size());
  for (const auto& [i, j, v] : entries) t.push_back({i, j, Complex(v, 0.0)});
  return SparseSymmetricMatrix(dim, std::move(t));
}

}  // namespace scocg
