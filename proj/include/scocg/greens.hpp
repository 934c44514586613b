#pragma once

/// \file greens.hpp
/// \brief Green's-function columns G_ij(z_k) = e_i^T (z_k I - H)^{-1} e_j
/// on an energy grid, via one shifted COCG family.
///
/// With A = -H and shifts z_k = start + k*step + i*delta, the family
/// (A + z_k I) x^(k) = e_j is exactly (z_k I - H) x^(k) = e_j, and
/// G_ij(z_k) = x^(k)_i.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scocg/linalg.hpp"
#include "scocg/solve_family.hpp"

namespace scocg {

/// z_k = start + k * step + i * delta for k = 0..count-1.
struct EnergyGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t count = 1;
  double delta = 1e-3;

  void validate() const {
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "energy grid needs at least one point");
    if (delta == 0.0) throw Error(ErrorCode::InvalidArgument, "energy grid needs a nonzero imaginary part");
  }

  Complex z(std::size_t k) const { return {start + static_cast<double>(k) * step, delta}; }

  std::vector<Complex> points() const {
    std::vector<Complex> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = z(k);
    return out;
  }

  /// Zero-based index of the middle point, ceil(count / 2) counted from one.
  std::size_t middle() const { return (count + 1) / 2 - 1; }
};

struct GreensProblem {
  SparseSymmetricMatrix a;  // -H
  ShiftFamily family;
};

/// Builds A = -H, b = e_j and the shift list z_k. seed < 0 picks the grid middle.
inline GreensProblem build_shift_family(const SparseSymmetricMatrix& h, const EnergyGrid& grid, std::size_t j,
                                        long seed = -1, double eps1 = 1e-12, double eps2 = 1e-12) {
  grid.validate();
  if (j >= h.dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j) + " for N = " + std::to_string(h.dim()));
  }
  GreensProblem out{h.scaled(Complex(-1.0, 0.0)), {}};
  out.family.shifts = grid.points();
  out.family.b = unit_vector(h.dim(), j);
  out.family.seed = seed < 0 ? grid.middle() : static_cast<std::size_t>(seed);
  if (out.family.seed >= grid.count) throw Error(ErrorCode::IndexOutOfRange, "initial seed outside the grid");
  out.family.eps1 = eps1;
  out.family.eps2 = eps2;
  return out;
}

inline Complex greens_entry(std::span<const Complex> x, std::size_t i) {
  if (i >= x.size()) throw Error(ErrorCode::IndexOutOfRange, "greens_entry row " + std::to_string(i));
  return x[i];
}

struct GreensResult {
  std::size_t column = 0;
  std::vector<std::size_t> rows;
  EnergyGrid grid;
  /// values[k][r] = G_{rows[r], column}(z_k)
  std::vector<std::vector<Complex>> values;
  FamilySolveReport report;

  Complex at(std::size_t row, std::size_t k) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r] == row) return values.at(k)[r];
    }
    throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(row) + " was not probed");
  }
};

struct GreensOptions {
  long seed = -1;
  double eps1 = 1e-12;
  double eps2 = 1e-12;
  FamilyOptions family;
};

/// Solves the column j family and extracts the probed rows. Unsolved shifts
/// still get values (the last iterate); report.shifts[k].status says which.
inline GreensResult compute_green_column(const SparseSymmetricMatrix& h, const EnergyGrid& grid, std::size_t j,
                                         std::vector<std::size_t> rows, const GreensOptions& opts = {}) {
  GreensProblem prob = build_shift_family(h, grid, j, opts.seed, opts.eps1, opts.eps2);
  if (rows.empty()) rows.push_back(j);
  for (std::size_t r : rows) {
    if (r >= h.dim()) throw Error(ErrorCode::IndexOutOfRange, "probe row " + std::to_string(r));
  }
  FamilySolution sol = solve_family(prob.a, prob.family, opts.family);
  GreensResult out;
  out.column = j;
  out.rows = std::move(rows);
  out.grid = grid;
  out.values.resize(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) {
    for (std::size_t r : out.rows) out.values[k].push_back(greens_entry(sol.x[k], r));
  }
  out.report = std::move(sol.report);
  return out;
}

/// Nearest-neighbour chain: diagonal `onsite`, off-diagonal `hopping`, plus
/// the (0, N-1) bond when periodic. The open chain has eigenvalues
/// onsite + 2 hopping cos(pi mu / (N + 1)), mu = 1..N.
inline SparseSymmetricMatrix make_tight_binding_chain(std::size_t n, double onsite, double hopping,
                                                      bool periodic = false) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "chain length must be at least 2");
  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (onsite != 0.0) acc[{i, i}] += onsite;
    if (i + 1 < n) {
      acc[{i, i + 1}] += hopping;
      acc[{i + 1, i}] += hopping;
    }
  }
  if (periodic) {
    acc[{0, n - 1}] += hopping;
    acc[{n - 1, 0}] += hopping;
  }
  std::vector<Triplet> t;
  t.reserve(acc.size());
  for (const auto& [ij, v] : acc) t.push_back({ij.first, ij.second, Complex(v, 0.0)});
  return SparseSymmetricMatrix(n, std::move(t));
}

}  // namespace scocg
