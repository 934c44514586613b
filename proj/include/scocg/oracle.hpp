#pragma once

/// \file oracle.hpp
/// \brief Brute-force references for tests and the check/bench commands:
/// dense LU, cyclic Jacobi eigendecomposition and independent per-shift
/// COCG. Never used by the solvers themselves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "scocg/cocg.hpp"
#include "scocg/linalg.hpp"

namespace scocg::oracle {

inline constexpr std::size_t kDefaultCap = 512;

/// Row-major N x N complex matrix.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n = 0, std::size_t cap = kDefaultCap) : n_(n), data_(n * n) {
    if (n > cap) {
      throw Error(ErrorCode::InvalidArgument,
                  "dense oracle size " + std::to_string(n) + " above cap " + std::to_string(cap));
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix from_sparse(const SparseSymmetricMatrix& a, Complex shift = {},
                                 std::size_t cap = kDefaultCap) {
    DenseMatrix m(a.dim(), cap);
    for (const Triplet& t : a.triplets()) m(t.row, t.col) = t.value;
    for (std::size_t i = 0; i < a.dim(); ++i) m(i, i) += shift;
    return m;
  }

  std::size_t dim() const { return n_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  Vector apply(std::span<const Complex> x) const {
    Vector y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Complex s{};
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

/// LU with partial pivoting. Throws Singular when a pivot falls to
/// 1e-14 * max|A_ij| or below.
inline Vector dense_solve(DenseMatrix a, std::span<const Complex> b) {
  const std::size_t n = a.dim();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "dense_solve");
  const double floor = 1e-14 * a.max_abs();
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    }
    if (!(std::abs(a(piv, k)) > floor)) {
      throw Error(ErrorCode::Singular, "dense_solve: pivot " + std::to_string(k));
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex l = a(i, k) / a(k, k);
      if (l == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
      x[i] -= l * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    Complex s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

/// Eigenpairs of a real symmetric matrix; vectors[mu][i] is component i of
/// eigenvector mu.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi. Converged once every off-diagonal magnitude is at most
/// 1e-12 * ||H||_F; gives up after max_sweeps.
inline SymmetricEigen jacobi_eigen(std::vector<std::vector<double>> h, std::size_t max_sweeps = 100) {
  const std::size_t n = h.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  double fro = 0.0;
  for (const auto& row : h) {
    if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "jacobi_eigen: non-square");
    for (double e : row) fro += e * e;
  }
  fro = std::sqrt(fro);
  const double tol = 1e-12 * fro;

  auto off_max = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, std::abs(h[i][j]));
    return m;
  };

  SymmetricEigen out;
  while (off_max() > tol) {
    if (out.sweeps == max_sweeps) {
      throw Error(ErrorCode::JacobiNoConvergence, "no convergence after " + std::to_string(max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = h[p][q];
        if (std::abs(apq) <= 0.1 * tol) continue;
        const double theta = (h[q][q] - h[p][p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double hkp = h[k][p];
          const double hkq = h[k][q];
          h[k][p] = c * hkp - s * hkq;
          h[k][q] = s * hkp + c * hkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double hpk = h[p][k];
          const double hqk = h[q][k];
          h[p][k] = c * hpk - s * hqk;
          h[q][k] = s * hpk + c * hqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
    ++out.sweeps;
  }
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t mu = 0; mu < n; ++mu) {
    out.values[mu] = h[mu][mu];
    for (std::size_t i = 0; i < n; ++i) out.vectors[mu][i] = v[i][mu];
  }
  return out;
}

inline std::vector<std::vector<double>> real_dense(const SparseSymmetricMatrix& h, std::size_t cap = kDefaultCap) {
  if (h.dim() > cap) throw Error(ErrorCode::InvalidArgument, "oracle cap exceeded");
  if (!h.is_real()) throw Error(ErrorCode::InvalidArgument, "eigen oracle needs a real symmetric matrix");
  std::vector<std::vector<double>> d(h.dim(), std::vector<double>(h.dim(), 0.0));
  for (const Triplet& t : h.triplets()) d[t.row][t.col] = t.value.real();
  return d;
}

/// sum_mu v_mu(i) v_mu(j) / (z - E_mu)
inline Complex resolvent(const SymmetricEigen& eig, Complex z, std::size_t i, std::size_t j) {
  Complex g{};
  for (std::size_t mu = 0; mu < eig.values.size(); ++mu) {
    g += eig.vectors[mu][i] * eig.vectors[mu][j] / (z - eig.values[mu]);
  }
  return g;
}

inline Complex eig_resolvent(const SparseSymmetricMatrix& h, Complex z, std::size_t i, std::size_t j) {
  if (i >= h.dim() || j >= h.dim()) throw Error(ErrorCode::IndexOutOfRange, "eig_resolvent");
  return resolvent(jacobi_eigen(real_dense(h)), z, i, j);
}

struct BaselineResult {
  std::vector<Vector> solutions;
  std::vector<std::uint64_t> mvs;
  std::vector<SolveStatus> statuses;
  std::uint64_t total_mvs = 0;

  bool all_converged() const {
    return std::all_of(statuses.begin(), statuses.end(), [](SolveStatus s) { return s == SolveStatus::Converged; });
  }
};

/// Independent cocg_solve per shift; the "no shifting" cost reference.
inline BaselineResult per_shift_cocg_baseline(const SparseSymmetricMatrix& a, std::span<const Complex> shifts,
                                              std::span<const Complex> b, double eps, std::size_t max_iter = 0,
                                              bool keep_solutions = true) {
  BaselineResult out;
  for (const Complex& s : shifts) {
    const std::uint64_t before = a.mv_count();
    CocgResult r = cocg_solve(a, s, b, eps, max_iter);
    const std::uint64_t used = a.mv_count() - before;
    out.mvs.push_back(used);
    out.total_mvs += used;
    out.statuses.push_back(r.status);
    if (keep_solutions) out.solutions.push_back(std::move(r.x));
  }
  return out;
}

}  // namespace scocg::oracle
