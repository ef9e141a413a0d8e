#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sqtile/matrix.hpp"
#include "sqtile/numeric.hpp"

namespace sqtile {

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

inline RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

inline Matrix<double> to_doubles(const RatMat& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

inline Matrix<double> to_doubles(const IntMat& m) {
  Matrix<double> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

// ---------------------------------------------------------------------------
// Rational elimination

// In-place reduced row echelon form. Returns the pivot columns.
inline std::vector<std::size_t> rref(RatMat& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(row, p);
    Rat inv = Rat(1) / m(row, col);
    m.scale_row(row, inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i != row && m(i, col) != 0) m.add_row(i, row, -m(i, col));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RatMat m) { return rref(m).size(); }
inline std::size_t rank(const IntMat& m) { return rank(to_rat(m)); }

// Kernel of m as a matrix whose columns span ker(m).
inline RatMat kernel(RatMat m) {
  auto pivots = rref(m);
  std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMat k(n, free_cols.size());
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    std::size_t f = free_cols[fi];
    k(f, fi) = 1;
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) k(pivots[pi], fi) = -m(pi, f);
  }
  return k;
}

// Solve a * x = b for every column of b; returns nullopt if inconsistent.
inline std::optional<RatMat> solve(const RatMat& a, const RatMat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  RatMat aug = a.augment(b);
  auto pivots = rref(aug);
  // Any pivot in the b-part means inconsistency.
  for (auto p : pivots)
    if (p >= a.cols()) return std::nullopt;
  RatMat x(a.cols(), b.cols());
  for (std::size_t pi = 0; pi < pivots.size(); ++pi)
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[pi], j) = aug(pi, a.cols() + j);
  return x;
}

inline std::optional<RatVec> solve(const RatMat& a, const RatVec& b) {
  RatMat bm(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) bm(i, 0) = b[i];
  auto x = solve(a, bm);
  if (!x) return std::nullopt;
  return x->col(0);
}

inline RatMat inverse(const RatMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
  auto x = solve(a, RatMat::identity(a.rows()));
  if (!x || rank(a) != a.rows()) throw std::invalid_argument("inverse: singular matrix");
  return *x;
}

inline Rat det(RatMat m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
  Rat d(1);
  std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && m(p, col) == 0) ++p;
    if (p == n) return Rat(0);
    if (p != col) {
      m.swap_rows(col, p);
      d = -d;
    }
    d *= m(col, col);
    Rat inv = Rat(1) / m(col, col);
    for (std::size_t i = col + 1; i < n; ++i)
      if (m(i, col) != 0) m.add_row(i, col, -m(i, col) * inv);
  }
  return d;
}

inline Int det(const IntMat& m) {
  Rat d = det(to_rat(m));
  return num(d);  // determinant of an integer matrix is an integer
}

// Integer matrix inverse; requires det = ±1.
inline IntMat unimodular_inverse(const IntMat& m) {
  RatMat inv = inverse(to_rat(m));
  IntMat r(inv.rows(), inv.cols());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) {
      if (den(inv(i, j)) != 1)
        throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
      r(i, j) = num(inv(i, j));
    }
  return r;
}

// ---------------------------------------------------------------------------
// Integer lattice algorithms

// Column-style Hermite reduction: applies unimodular column operations to a
// working copy of `a` until every column is either zero or has a staircase of
// leading entries. `v` accumulates the operations, so a * v = reduced.
inline void column_echelon(IntMat& a, IntMat& v) {
  std::size_t m = a.rows(), n = a.cols();
  v = IntMat::identity(n);
  std::size_t col = 0;
  for (std::size_t row = 0; row < m && col < n; ++row) {
    // Euclid on the entries a(row, col..n-1).
    while (true) {
      std::size_t jmin = n;
      Int best = 0;
      for (std::size_t j = col; j < n; ++j) {
        Int x = abs(a(row, j));
        if (x != 0 && (jmin == n || x < best)) {
          best = x;
          jmin = j;
        }
      }
      if (jmin == n) break;  // row is zero from col onward
      if (jmin != col) {
        a.swap_cols(col, jmin);
        v.swap_cols(col, jmin);
      }
      bool cleared = true;
      for (std::size_t j = col + 1; j < n; ++j) {
        if (a(row, j) != 0) {
          Int q = a(row, j) / a(row, col);
          a.add_col(j, col, -q);
          v.add_col(j, col, -q);
          if (a(row, j) != 0) cleared = false;
        }
      }
      if (cleared) {
        if (a(row, col) < 0) {
          a.scale_col(col, Int(-1));
          v.scale_col(col, Int(-1));
        }
        ++col;
        break;
      }
    }
  }
}

// Basis of the integer kernel lattice of `a` (columns). The kernel of an
// integer matrix is automatically saturated.
inline IntMat integer_kernel(const IntMat& a) {
  IntMat work = a, v;
  column_echelon(work, v);
  std::vector<std::size_t> zero_cols;
  for (std::size_t j = 0; j < work.cols(); ++j) {
    bool z = true;
    for (std::size_t i = 0; i < work.rows(); ++i)
      if (work(i, j) != 0) {
        z = false;
        break;
      }
    if (z) zero_cols.push_back(j);
  }
  IntMat k(a.cols(), zero_cols.size());
  for (std::size_t idx = 0; idx < zero_cols.size(); ++idx)
    for (std::size_t i = 0; i < a.cols(); ++i) k(i, idx) = v(i, zero_cols[idx]);
  return k;
}

struct SmithResult {
  IntMat d;        // diagonal form, u * a * v = d
  IntMat u, v;
  IntMat u_inv;    // maintained alongside u; u * u_inv = I
};

// Smith normal form with transforms. Sizes here are small (tens), so the
// classical pivot-and-reduce algorithm is enough.
inline SmithResult smith_normal_form(IntMat a) {
  std::size_t m = a.rows(), n = a.cols();
  SmithResult r;
  r.u = IntMat::identity(m);
  r.u_inv = IntMat::identity(m);
  r.v = IntMat::identity(n);

  auto row_op = [&](std::size_t i, std::size_t j, const Int& f) {
    a.add_row(i, j, f);
    r.u.add_row(i, j, f);
    r.u_inv.add_col(j, i, -f);
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    r.u.swap_rows(i, j);
    r.u_inv.swap_cols(i, j);
  };
  auto row_neg = [&](std::size_t i) {
    a.scale_row(i, Int(-1));
    r.u.scale_row(i, Int(-1));
    r.u_inv.scale_col(i, Int(-1));
  };
  auto col_op = [&](std::size_t i, std::size_t j, const Int& f) {
    a.add_col(i, j, f);
    r.v.add_col(i, j, f);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    r.v.swap_cols(i, j);
  };

  std::size_t k = std::min(m, n);
  for (std::size_t t = 0; t < k; ++t) {
    while (true) {
      // Find the minimal nonzero entry in the trailing block.
      std::size_t pi = m, pj = n;
      Int best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          Int x = abs(a(i, j));
          if (x != 0 && (pi == m || x < best)) {
            best = x;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) break;  // trailing block is zero
      if (pi != t) row_swap(t, pi);
      if (pj != t) col_swap(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i)
        if (a(i, t) != 0) {
          row_op(i, t, -(a(i, t) / a(t, t)));
          if (a(i, t) != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (a(t, j) != 0) {
          col_op(j, t, -(a(t, j) / a(t, t)));
          if (a(t, j) != 0) clean = false;
        }
      if (!clean) continue;
      // Enforce divisibility of the remaining block by a(t,t).
      bool divides_all = true;
      for (std::size_t i = t + 1; i < m && divides_all; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            row_op(t, i, Int(1));
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (t < std::min(m, n) && a(t, t) < 0) row_neg(t);
  }
  r.d = a;
  return r;
}

// ---------------------------------------------------------------------------
// Subspace utilities (rational column spans)

// Canonical basis of the column span: RREF of the transpose, transposed back.
// Two matrices span the same subspace iff their canonical forms are equal.
inline RatMat canonical_basis(const RatMat& span_cols) {
  RatMat t = span_cols.transpose();
  auto pivots = rref(t);
  RatMat out(span_cols.rows(), pivots.size());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < span_cols.rows(); ++j) out(j, i) = t(i, j);
  return out;
}

inline bool subspace_contains(const RatMat& space, const RatVec& v) {
  if (is_zero_vector(v)) return true;
  if (space.cols() == 0) return false;
  return solve(space, v).has_value();
}

inline bool subspace_contains(const RatMat& space, const RatMat& other) {
  for (std::size_t j = 0; j < other.cols(); ++j)
    if (!subspace_contains(space, other.col(j))) return false;
  return true;
}

inline bool subspace_equal(const RatMat& a, const RatMat& b) {
  return canonical_basis(a) == canonical_basis(b);
}

inline RatMat subspace_sum(const RatMat& a, const RatMat& b) {
  if (a.cols() == 0) return canonical_basis(b);
  if (b.cols() == 0) return canonical_basis(a);
  return canonical_basis(a.augment(b));
}

// Intersection of column spans: combinations a*x = b*y found from
// ker([a | -b]).
inline RatMat subspace_intersection(const RatMat& a, const RatMat& b) {
  if (a.cols() == 0 || b.cols() == 0) return RatMat(a.rows(), 0);
  RatMat stacked = a.augment(-b);
  RatMat k = kernel(stacked);
  RatMat result(a.rows(), k.cols());
  for (std::size_t j = 0; j < k.cols(); ++j) {
    RatVec x(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) x[i] = k(i, j);
    result.set_col(j, a * x);
  }
  return canonical_basis(result);
}

// Preimage of the column span of `space` under `map`: {x : map*x in space}.
inline RatMat subspace_preimage(const RatMat& map, const RatMat& space) {
  // map*x = space*y  <=>  [map | -space] (x;y) = 0
  RatMat stacked = map.augment(-space);
  RatMat k = kernel(stacked);
  RatMat xs(map.cols(), k.cols());
  for (std::size_t j = 0; j < k.cols(); ++j)
    for (std::size_t i = 0; i < map.cols(); ++i) xs(i, j) = k(i, j);
  return canonical_basis(xs);
}

// Clear denominators and divide out content column-wise: a rational basis
// becomes a primitive integer one spanning the same subspace over Q.
inline IntMat primitive_integer_basis(const RatMat& basis) {
  IntMat out(basis.rows(), basis.cols());
  for (std::size_t j = 0; j < basis.cols(); ++j) {
    Int lcm_den = 1;
    for (std::size_t i = 0; i < basis.rows(); ++i)
      lcm_den = boost::multiprecision::lcm(lcm_den, den(basis(i, j)));
    IntVec col(basis.rows());
    Int g = 0;
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      col[i] = num(basis(i, j) * lcm_den);
      g = boost::multiprecision::gcd(g, col[i]);
    }
    if (g == 0) g = 1;
    for (std::size_t i = 0; i < basis.rows(); ++i) out(i, j) = col[i] / g;
  }
  return out;
}

}  // namespace sqtile
