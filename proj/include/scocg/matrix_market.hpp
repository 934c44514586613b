#pragma once

/// \file matrix_market.hpp
/// \brief Matrix Market coordinate I/O for symmetric matrices.
///
/// Accepts `real`, `integer` and `complex` fields with `symmetric` or
/// `general` symmetry. Symmetric files may store either triangle; the
/// other one is filled in. General files must be numerically symmetric.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scocg/linalg.hpp"

namespace scocg {

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline Error mm_error(ErrorCode code, std::size_t line, const std::string& what) {
  return Error(code, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

inline SparseSymmetricMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw detail::mm_error(ErrorCode::MalformedHeader, 1, "empty input");
  ++lineno;

  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || symmetry.empty()) {
    throw detail::mm_error(ErrorCode::MalformedHeader, lineno, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  }
  object = detail::lower(object);
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (object != "matrix") throw detail::mm_error(ErrorCode::MalformedHeader, lineno, "object '" + object + "'");
  if (format != "coordinate") {
    throw detail::mm_error(ErrorCode::UnsupportedQualifier, lineno, "format '" + format + "'");
  }
  if (field != "real" && field != "integer" && field != "complex") {
    throw detail::mm_error(ErrorCode::UnsupportedQualifier, lineno, "field '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw detail::mm_error(ErrorCode::UnsupportedQualifier, lineno, "symmetry '" + symmetry + "'");
  }
  const bool is_complex = field == "complex";
  const bool is_symmetric = symmetry == "symmetric";

  // size line
  std::size_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw detail::mm_error(ErrorCode::MalformedHeader, lineno, "bad size line");
    have_size = true;
    break;
  }
  if (!have_size) throw detail::mm_error(ErrorCode::MalformedHeader, lineno, "missing size line");
  if (rows != cols) {
    throw detail::mm_error(ErrorCode::MalformedHeader, lineno,
                           "matrix is " + std::to_string(rows) + "x" + std::to_string(cols) + ", not square");
  }

  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, Complex>> seen;
  std::vector<Triplet> entries;
  entries.reserve(is_symmetric ? 2 * nnz : nnz);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ss >> i >> j >> re) || (is_complex && !(ss >> im))) {
      throw detail::mm_error(ErrorCode::MalformedEntry, lineno, "cannot parse entry");
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols) {
      throw detail::mm_error(ErrorCode::IndexOutOfRange, lineno,
                             "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                                 std::to_string(rows) + "x" + std::to_string(cols));
    }
    std::size_t r = static_cast<std::size_t>(i - 1);
    std::size_t c = static_cast<std::size_t>(j - 1);
    auto key = is_symmetric ? std::make_pair(std::max(r, c), std::min(r, c)) : std::make_pair(r, c);
    const Complex v(re, im);
    if (auto [it, inserted] = seen.emplace(key, std::make_pair(lineno, v)); !inserted) {
      throw detail::mm_error(ErrorCode::DuplicateEntry, lineno,
                             "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") repeats line " +
                                 std::to_string(it->second.first));
    }
    entries.push_back({r, c, v});
    if (is_symmetric && r != c) entries.push_back({c, r, v});
    ++count;
  }
  if (count != nnz) {
    throw detail::mm_error(ErrorCode::MalformedEntry, lineno,
                           "expected " + std::to_string(nnz) + " entries, found " + std::to_string(count));
  }
  if (!is_symmetric) {
    for (const auto& [key, where] : seen) {
      const auto [r, c] = key;
      if (r == c) continue;
      auto partner = seen.find({c, r});
      if (partner == seen.end()) {
        throw detail::mm_error(ErrorCode::SymmetryViolation, where.first,
                               "entry (" + std::to_string(r + 1) + ", " + std::to_string(c + 1) +
                                   ") has no transpose partner");
      }
      if (partner->second.second != where.second) {
        throw detail::mm_error(ErrorCode::SymmetryViolation, std::max(where.first, partner->second.first),
                               "entry (" + std::to_string(r + 1) + ", " + std::to_string(c + 1) +
                                   ") differs from its transpose");
      }
    }
  }
  return SparseSymmetricMatrix(rows, std::move(entries));
}

inline SparseSymmetricMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_matrix_market(in);
}

/// Writes the lower triangle with a `symmetric` qualifier; the field is
/// `real` when every value is real. 17 significant digits round-trip.
inline void write_matrix_market(const SparseSymmetricMatrix& a, std::ostream& out) {
  const bool real = a.is_real();
  std::vector<Triplet> lower;
  for (const Triplet& t : a.triplets()) {
    if (t.row >= t.col) lower.push_back(t);
  }
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " symmetric\n";
  out << a.dim() << ' ' << a.dim() << ' ' << lower.size() << '\n';
  char buf[96];
  for (const Triplet& t : lower) {
    if (real) {
      std::snprintf(buf, sizeof buf, "%zu %zu %.16e\n", t.row + 1, t.col + 1, t.value.real());
    } else {
      std::snprintf(buf, sizeof buf, "%zu %zu %.16e %.16e\n", t.row + 1, t.col + 1, t.value.real(), t.value.imag());
    }
    out << buf;
  }
}

inline void write_matrix_market(const SparseSymmetricMatrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_matrix_market(a, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace scocg
