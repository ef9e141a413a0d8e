#pragma once

#include <map>
#include <vector>

#include "sqtile/exact_linalg.hpp"

namespace sqtile {

// Dense polynomial over Rat, coefficient of x^i at index i.
using Poly = std::vector<Rat>;

inline void poly_trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline int poly_deg(const Poly& p) {
  for (std::size_t i = p.size(); i-- > 0;)
    if (p[i] != 0) return static_cast<int>(i);
  return -1;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  poly_trim(r);
  return r;
}

// Division with remainder; requires nonzero divisor.
inline void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  int db = poly_deg(b);
  if (db < 0) throw std::invalid_argument("poly_divmod: zero divisor");
  r = a;
  poly_trim(r);
  q.assign(std::max<std::size_t>(1, a.size()), Rat(0));
  while (poly_deg(r) >= db) {
    int dr = poly_deg(r);
    Rat c = r[dr] / b[db];
    q[dr - db] += c;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= c * b[i];
    poly_trim(r);
    if (poly_deg(r) < 0) break;
  }
  poly_trim(q);
}

inline bool poly_divides(const Poly& b, const Poly& a) {
  Poly q, r;
  poly_divmod(a, b, q, r);
  return poly_deg(r) < 0;
}

// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier.
inline Poly charpoly(const RatMat& a) {
  std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("charpoly: not square");
  Poly c(n + 1, Rat(0));
  c[n] = 1;
  RatMat m = RatMat::identity(n);  // M_0
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    Rat tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
    Rat ck = -tr / Rat(Int(k));
    c[n - k] = ck;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += ck;
  }
  return c;
}

// Integer-matrix variant: the Faddeev-LeVerrier iterates stay integral and
// the trace divisions are exact, so everything runs over Int.
inline std::vector<Int> charpoly_int(const IntMat& a) {
  std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("charpoly_int: not square");
  std::vector<Int> c(n + 1, Int(0));
  c[n] = 1;
  IntMat m = IntMat::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    Int tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
    if (tr % Int(k) != 0) throw std::logic_error("charpoly_int: inexact division");
    Int ck = -tr / Int(k);
    c[n - k] = ck;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += ck;
  }
  return c;
}

inline int euler_phi(int d) {
  int result = d, x = d;
  for (int p = 2; p * p <= x; ++p) {
    if (x % p == 0) {
      result -= result / p;
      while (x % p == 0) x /= p;
    }
  }
  if (x > 1) result -= result / x;
  return result;
}

// Cyclotomic polynomial, computed by dividing x^d - 1 by the lower ones.
inline const Poly& cyclotomic(int d) {
  static std::map<int, Poly> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  Poly xn(d + 1, Rat(0));
  xn[0] = -1;
  xn[d] = 1;
  for (int e = 1; e < d; ++e) {
    if (d % e == 0) {
      Poly q, r;
      poly_divmod(xn, cyclotomic(e), q, r);
      xn = q;
    }
  }
  return cache.emplace(d, xn).first->second;
}

// Squarefree product of the cyclotomic polynomials dividing p.
// If strip_all, divides each factor out with multiplicity and reports whether
// anything non-cyclotomic remains.
inline Poly cyclotomic_part(const Poly& p, bool* fully_cyclotomic = nullptr) {
  Poly rest = p;
  Poly sqfree{Rat(1)};
  int degree = poly_deg(p);
  // phi(d) >= sqrt(d/2), so every d with phi(d) <= degree is <= 2 degree^2;
  // phi itself is not monotonic, so each d must be tested.
  int d_bound = degree > 0 ? 2 * degree * degree + 2 : 0;
  for (int d = 1; d <= d_bound; ++d) {
    if (euler_phi(d) > degree) continue;
    const Poly& phi = cyclotomic(d);
    if (poly_deg(phi) > poly_deg(rest)) continue;
    if (poly_divides(phi, rest)) {
      sqfree = poly_mul(sqfree, phi);
      Poly q, r;
      do {
        poly_divmod(rest, phi, q, r);
        if (poly_deg(r) >= 0) break;
        rest = q;
      } while (poly_deg(rest) >= poly_deg(phi));
    }
  }
  if (fully_cyclotomic) *fully_cyclotomic = (poly_deg(rest) <= 0);
  return sqfree;
}

// True iff p is (up to scalar) a product of cyclotomic polynomials, i.e. all
// roots lie on the unit circle and are roots of unity.
inline bool is_cyclotomic_product(const Poly& p) {
  bool full = false;
  cyclotomic_part(p, &full);
  return full;
}

inline RatMat poly_eval_matrix(const Poly& p, const RatMat& a) {
  std::size_t n = a.rows();
  RatMat acc(n, n);
  RatMat power = RatMat::identity(n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0) acc = acc + power * p[i];
    if (i + 1 < p.size()) power = power * a;
  }
  return acc;
}

// Maximal subspace on which the single matrix acts with bounded powers:
// the kernel of q(A), q = squarefree product of cyclotomic factors of the
// characteristic polynomial. (Bounded <=> eigenvalues are roots of unity and
// the action there is semisimple; the squarefree kernel enforces both.)
inline RatMat bounded_part(const RatMat& a) {
  Poly chi = charpoly(a);
  Poly q = cyclotomic_part(chi);
  if (poly_deg(q) <= 0) return RatMat(a.rows(), 0);
  return canonical_basis(kernel(poly_eval_matrix(q, a)));
}

// Integer fast path: the characteristic polynomial and the cyclotomic
// divisibility tests run over Int; only the final kernel works over Rat.
inline RatMat bounded_part(const IntMat& a) {
  std::vector<Int> chi = charpoly_int(a);
  Poly chi_rat(chi.size());
  for (std::size_t i = 0; i < chi.size(); ++i) chi_rat[i] = Rat(chi[i]);
  Poly q = cyclotomic_part(chi_rat);
  if (poly_deg(q) <= 0) return RatMat(a.rows(), 0);
  IntMat qa(a.rows(), a.cols());
  {
    // Horner evaluation over Int; q is monic with integer coefficients.
    IntMat acc = IntMat::identity(a.rows());
    for (int i = poly_deg(q) - 1; i >= 0; --i) {
      acc = a * acc;
      Int ci = num(q[i]);
      for (std::size_t r = 0; r < a.rows(); ++r) acc(r, r) += ci;
    }
    qa = acc;
  }
  return canonical_basis(kernel(to_rat(qa)));
}

}  // namespace sqtile
