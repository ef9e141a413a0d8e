#pragma once

#include <vector>

#include <json.hpp>

#include "sqtile/exact_linalg.hpp"
#include "sqtile/stratum.hpp"

namespace sqtile {

// Edge indexing for the square complex of an origami with n squares:
// index i in [0, n)      : sigma_i, the bottom edge of square i (east-oriented)
// index n + i            : tau_i, the left edge of square i (north-oriented)
//
// Square i has boundary  sigma_i + tau_{h(i)} - sigma_{v(i)} - tau_i.
// A relative cohomology class is a cochain vector in Z^{2n} (values on edges)
// that vanishes on every square boundary; vertices all lie in Sigma, so there
// are no relative coboundaries and H^1(M, Sigma; Z) is exactly that kernel.

inline std::size_t sigma_index(const Origami&, int i) { return static_cast<std::size_t>(i); }
inline std::size_t tau_index(const Origami& o, int i) {
  return static_cast<std::size_t>(o.n + i);
}

// Coboundary C^1 -> C^2: row per square, alpha(boundary).
inline IntMat delta1(const Origami& o) {
  IntMat d(o.n, 2 * o.n);
  for (int i = 0; i < o.n; ++i) {
    d(i, sigma_index(o, i)) += 1;
    d(i, tau_index(o, o.h(i))) += 1;
    d(i, sigma_index(o, o.v(i))) -= 1;
    d(i, tau_index(o, i)) -= 1;
  }
  return d;
}

// Vertex class of the lower-left corner of each square.
inline std::vector<int> vertex_class_of_square(const Origami& o) {
  auto classes = vertex_classes(o);
  std::vector<int> cls(o.n, -1);
  for (std::size_t k = 0; k < classes.size(); ++k)
    for (int i : classes[k]) cls[i] = static_cast<int>(k);
  return cls;
}

// Coboundary C^0 -> C^1 on absolute cochains (functions on vertex classes).
inline IntMat delta0(const Origami& o) {
  auto cls = vertex_class_of_square(o);
  int s = 1 + *std::max_element(cls.begin(), cls.end());
  IntMat d(2 * o.n, s);
  for (int i = 0; i < o.n; ++i) {
    // sigma_i runs from the corner of square i to the corner of h(i).
    d(sigma_index(o, i), cls[o.h(i)]) += 1;
    d(sigma_index(o, i), cls[i]) -= 1;
    // tau_i runs from the corner of square i to the corner of v(i).
    d(tau_index(o, i), cls[o.v(i)]) += 1;
    d(tau_index(o, i), cls[i]) -= 1;
  }
  return d;
}

// Intersection pairing of two closed cochains, via the cup product on the
// triangulation of each square along its main diagonal
// (Alexander-Whitney on (LL,LR,UR) minus (LL,UL,UR)):
//   <a, b> = sum_i [ a(sigma_i) b(tau_{h(i)}) - a(tau_i) b(sigma_{v(i)}) ].
// Only valid on cocycles; on classes it is the symplectic intersection form.
inline IntMat edge_pairing_matrix(const Origami& o) {
  IntMat je(2 * o.n, 2 * o.n);
  for (int i = 0; i < o.n; ++i) {
    je(sigma_index(o, i), tau_index(o, o.h(i))) += 1;
    je(tau_index(o, i), sigma_index(o, o.v(i))) -= 1;
  }
  return je;
}

template <typename T>
T edge_pairing(const IntMat& je, const std::vector<T>& a, const std::vector<T>& b) {
  T acc(0);
  for (std::size_t i = 0; i < je.rows(); ++i) {
    if (a[i] == T(0)) continue;
    for (std::size_t j = 0; j < je.cols(); ++j)
      if (je(i, j) != 0 && b[j] != T(0)) acc += a[i] * T(je(i, j)) * b[j];
  }
  return acc;
}

struct HomologyData {
  int n_squares = 0;
  int genus = 0;
  int n_singularities = 0;
  int abs_rank = 0;  // 2g
  int rel_rank = 0;  // 2g + s - 1 = n + 1

  // Columns are edge cochains. First abs_rank columns form a symplectic basis
  // of H^1(M; Z) (lifted), the last s-1 columns span ker p (vertex
  // coboundaries).
  IntMat rel_basis;        // 2n x rel_rank
  IntMat abs_cochains;     // 2n x abs_rank, the first block of rel_basis
  IntMat J;                // abs_rank x abs_rank, standard 2x2 blocks
  IntMat P;                // abs_rank x rel_rank, here [I | 0]
  IntMat je;               // 2n x 2n edge-level pairing
  IntMat jr;               // rel_rank x rel_rank pairing in rel coordinates
  IntVec taut_a, taut_b;   // abs coordinates of [Re w], [Im w]
  IntVec taut_a_rel, taut_b_rel;
  RatMat rel_left_inverse; // rel_rank x 2n, exact left inverse of rel_basis

  // Rel coordinates of a closed cochain. The left inverse projects arbitrary
  // vectors, so callers pass genuine cocycles (or use coords_checked).
  RatVec coords(const RatVec& cochain) const {
    RatVec c(rel_rank, Rat(0));
    for (int i = 0; i < rel_rank; ++i)
      for (std::size_t j = 0; j < cochain.size(); ++j)
        if (cochain[j] != 0) c[i] += rel_left_inverse(i, j) * cochain[j];
    return c;
  }

  std::vector<double> coords_double(const std::vector<double>& cochain) const {
    std::vector<double> c(rel_rank, 0.0);
    for (int i = 0; i < rel_rank; ++i)
      for (std::size_t j = 0; j < cochain.size(); ++j)
        if (cochain[j] != 0.0) c[i] += to_double(rel_left_inverse(i, j)) * cochain[j];
    return c;
  }

  RatVec coords_checked(const RatVec& cochain) const {
    RatVec c = coords(cochain);
    RatVec back(2 * n_squares, Rat(0));
    for (std::size_t i = 0; i < back.size(); ++i)
      for (int k = 0; k < rel_rank; ++k) back[i] += Rat(rel_basis(i, k)) * c[k];
    if (back != cochain) throw DimensionMismatch("cochain is not a relative cocycle");
    return c;
  }

  IntVec coords_int(const IntVec& cochain) const {
    RatVec r = coords_checked(to_rat(cochain));
    IntVec out(rel_rank);
    for (int i = 0; i < rel_rank; ++i) {
      if (den(r[i]) != 1) throw DimensionMismatch("expected integral coordinates");
      out[i] = num(r[i]);
    }
    return out;
  }

  template <typename T>
  std::vector<T> project(const std::vector<T>& rel_coords) const {
    if (static_cast<int>(rel_coords.size()) != rel_rank)
      throw DimensionMismatch("project: wrong length");
    return std::vector<T>(rel_coords.begin(), rel_coords.begin() + abs_rank);
  }
};

namespace detail {

// Integer symplectic Gram reduction: finds unimodular S with S^T G S equal to
// block-diagonal [[0,1],[-1,0]] blocks. G must be skew and unimodular.
inline IntMat symplectic_reduce(IntMat g) {
  std::size_t n = g.rows();
  IntMat s = IntMat::identity(n);
  auto cswap = [&](std::size_t i, std::size_t j) {
    g.swap_cols(i, j);
    g.swap_rows(i, j);
    s.swap_cols(i, j);
  };
  auto cadd = [&](std::size_t i, std::size_t j, const Int& f) {
    g.add_col(i, j, f);
    g.add_row(i, j, f);
    s.add_col(i, j, f);
  };
  auto cneg = [&](std::size_t i) {
    g.scale_col(i, Int(-1));
    g.scale_row(i, Int(-1));
    s.scale_col(i, Int(-1));
  };

  for (std::size_t t = 0; t + 1 < n; t += 2) {
    // Bring a minimal nonzero pairing into position (t, t+1).
    std::size_t bi = n, bj = n;
    Int best = 0;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Int x = abs(g(i, j));
        if (x != 0 && (bi == n || x < best)) {
          best = x;
          bi = i;
          bj = j;
        }
      }
    if (bi == n) throw Error("symplectic_reduce: degenerate form");
    if (bi != t) cswap(t, bi);
    if (bj == t) bj = bi;  // swapped away
    if (bj != t + 1) cswap(t + 1, bj);

    // Euclid along row t until <e_t, e_{t+1}> = 1 and the rest of row t is 0.
    while (true) {
      if (g(t, t + 1) < 0) cneg(t + 1);
      Int d = g(t, t + 1);
      bool clean = true;
      std::size_t kmin = n;
      Int kbest = 0;
      for (std::size_t k = t + 2; k < n; ++k) {
        if (g(t, k) != 0) {
          Int q = g(t, k) / d;
          cadd(k, t + 1, -q);
          if (g(t, k) != 0) {
            clean = false;
            Int x = abs(g(t, k));
            if (kmin == n || x < kbest) {
              kbest = x;
              kmin = k;
            }
          }
        }
      }
      if (clean) {
        if (d != 1) throw Error("symplectic_reduce: form is not unimodular");
        break;
      }
      cswap(t + 1, kmin);
    }
    // Clear pairings of the remaining vectors against the pivot pair:
    // x -> x + <f, x> e - <e, x> f kills both pairings since <e, f> = 1.
    for (std::size_t k = t + 2; k < n; ++k) {
      Int xe = g(t, k);      // <e, x>
      Int xf = g(t + 1, k);  // <f, x>
      if (xf != 0) cadd(k, t, xf);
      if (xe != 0) cadd(k, t + 1, -xe);
      if (g(t, k) != 0 || g(t + 1, k) != 0)
        throw Error("symplectic_reduce: projection failed");
    }
  }
  return s;
}

}  // namespace detail

inline HomologyData homology(const Origami& o) {
  HomologyData hd;
  StratumData st = stratum(o);
  hd.n_squares = o.n;
  hd.genus = st.genus;
  hd.n_singularities = st.n_singularities;
  hd.abs_rank = 2 * st.genus;
  hd.rel_rank = o.n + 1;
  int s = st.n_singularities;
  if (hd.rel_rank != hd.abs_rank + s - 1)
    throw Error("homology: rank bookkeeping failed (internal)");

  IntMat d1 = delta1(o);
  IntMat kernel_basis = integer_kernel(d1);  // 2n x (n+1)
  if (static_cast<int>(kernel_basis.cols()) != hd.rel_rank)
    throw Error("homology: unexpected relative rank");

  IntMat d0 = delta0(o);  // 2n x s; image lattice spanned by any s-1 columns
  IntMat kerp(2 * o.n, s - 1);
  for (int k = 0; k + 1 < s; ++k)
    for (int i = 0; i < 2 * o.n; ++i) kerp(i, k) = d0(i, k);

  // Coordinates of ker p inside the kernel lattice, then complete to a basis
  // of Z^{rel_rank} via Smith normal form; the completion projects to a basis
  // of H^1(M; Z) = ker(delta1) / im(delta0).
  IntMat abs_candidates(2 * o.n, hd.abs_rank);
  {
    auto y = solve(to_rat(kernel_basis), to_rat(kerp));
    if (!y) throw Error("homology: ker p does not lie in the cocycle lattice");
    IntMat yi(hd.rel_rank, s - 1);
    for (int i = 0; i < hd.rel_rank; ++i)
      for (int j = 0; j + 1 < s; ++j) {
        if (den((*y)(i, j)) != 1) throw Error("homology: non-integral ker p coordinates");
        yi(i, j) = num((*y)(i, j));
      }
    SmithResult snf = smith_normal_form(yi);
    for (int j = 0; j + 1 < s; ++j)
      if (snf.d(j, j) != 1) throw Error("homology: ker p is not saturated");
    for (int j = 0; j < hd.abs_rank; ++j) {
      IntVec coords = snf.u_inv.col(s - 1 + j);
      IntVec cochain(2 * o.n, Int(0));
      for (int r = 0; r < hd.rel_rank; ++r)
        if (coords[r] != 0)
          for (int i = 0; i < 2 * o.n; ++i) cochain[i] += kernel_basis(i, r) * coords[r];
      abs_candidates.set_col(j, cochain);
    }
  }

  hd.je = edge_pairing_matrix(o);

  // Gram matrix of the candidates under the intersection pairing, then an
  // integer symplectic change of basis.
  IntMat gram(hd.abs_rank, hd.abs_rank);
  for (int i = 0; i < hd.abs_rank; ++i)
    for (int j = 0; j < hd.abs_rank; ++j)
      gram(i, j) = edge_pairing(hd.je, abs_candidates.col(i), abs_candidates.col(j));
  IntMat change = detail::symplectic_reduce(gram);
  hd.abs_cochains = abs_candidates * change;

  hd.rel_basis = IntMat(2 * o.n, hd.rel_rank);
  for (int j = 0; j < hd.abs_rank; ++j) hd.rel_basis.set_col(j, hd.abs_cochains.col(j));
  for (int k = 0; k + 1 < s; ++k) hd.rel_basis.set_col(hd.abs_rank + k, kerp.col(k));

  hd.J = IntMat(hd.abs_rank, hd.abs_rank);
  for (int t = 0; t + 1 < hd.abs_rank; t += 2) {
    hd.J(t, t + 1) = 1;
    hd.J(t + 1, t) = -1;
  }
  hd.P = IntMat(hd.abs_rank, hd.rel_rank);
  for (int i = 0; i < hd.abs_rank; ++i) hd.P(i, i) = 1;

  // Exact left inverse of rel_basis (full column rank).
  {
    RatMat b = to_rat(hd.rel_basis);
    RatMat bt = b.transpose();
    RatMat gram_b = bt * b;
    hd.rel_left_inverse = inverse(gram_b) * bt;
  }

  // Pairing matrix in rel coordinates; equals [[J, 0], [0, 0]] because
  // coboundaries pair to zero against every cocycle.
  {
    IntMat bt = hd.rel_basis.transpose();
    hd.jr = bt * hd.je * hd.rel_basis;
    for (int i = 0; i < hd.rel_rank; ++i)
      for (int j = 0; j < hd.rel_rank; ++j) {
        Int expected = (i < hd.abs_rank && j < hd.abs_rank) ? hd.J(i, j) : Int(0);
        if (hd.jr(i, j) != expected)
          throw Error("homology: pairing normalization failed (internal)");
      }
  }

  // Tautological classes dx, dy as edge cochains.
  IntVec dx(2 * o.n, Int(0)), dy(2 * o.n, Int(0));
  for (int i = 0; i < o.n; ++i) {
    dx[sigma_index(o, i)] = 1;
    dy[tau_index(o, i)] = 1;
  }
  hd.taut_a_rel = hd.coords_int(dx);
  hd.taut_b_rel = hd.coords_int(dy);
  hd.taut_a = IntVec(hd.taut_a_rel.begin(), hd.taut_a_rel.begin() + hd.abs_rank);
  hd.taut_b = IntVec(hd.taut_b_rel.begin(), hd.taut_b_rel.begin() + hd.abs_rank);
  return hd;
}

// u^T J w on absolute coordinates.
template <typename T>
T pairing(const std::vector<T>& u, const std::vector<T>& w, const HomologyData& hd) {
  if (static_cast<int>(u.size()) != hd.abs_rank || static_cast<int>(w.size()) != hd.abs_rank)
    throw DimensionMismatch("pairing: vectors must have absolute rank length");
  T acc(0);
  for (int t = 0; t + 1 < hd.abs_rank; t += 2) acc += u[t] * w[t + 1] - u[t + 1] * w[t];
  return acc;
}

inline nlohmann::json int_matrix_to_json(const IntMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json int_vector_to_json(const IntVec& v) {
  nlohmann::json row = nlohmann::json::array();
  for (const auto& x : v) row.push_back(x.str());
  return row;
}

inline nlohmann::json homology_to_json(const HomologyData& hd) {
  nlohmann::json j;
  j["n_squares"] = hd.n_squares;
  j["genus"] = hd.genus;
  j["n_singularities"] = hd.n_singularities;
  j["abs_rank"] = hd.abs_rank;
  j["rel_rank"] = hd.rel_rank;
  j["rel_basis"] = int_matrix_to_json(hd.rel_basis);
  j["J"] = int_matrix_to_json(hd.J);
  j["P"] = int_matrix_to_json(hd.P);
  j["taut_a"] = int_vector_to_json(hd.taut_a);
  j["taut_b"] = int_vector_to_json(hd.taut_b);
  return j;
}

}  // namespace sqtile
