#pragma once

#include <string>

#include "sqtile/homology.hpp"

namespace sqtile {

// Integer matrix of the Gauss-Manin transport along one move or word:
// rel maps relative-cohomology coordinates at the source node to coordinates
// at the target node; abs is the induced map on absolute cohomology.
// Invariants (exact): abs^T J abs = J and P rel = abs P.
struct CocycleMatrix {
  IntMat rel;
  IntMat abs;
  std::string word;

  CocycleMatrix compose_after(const CocycleMatrix& first) const {
    return CocycleMatrix{rel * first.rel, abs * first.abs, first.word + word};
  }
  CocycleMatrix inverse() const {
    return CocycleMatrix{unimodular_inverse(rel), unimodular_inverse(abs),
                         "(" + word + ")^-1"};
  }
  bool satisfies_invariants(const HomologyData& hd) const {
    IntMat jt = abs.transpose() * hd.J * abs;
    if (jt != hd.J) return false;
    return hd.P * rel == abs * hd.P;
  }
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < rel.rows(); ++i)
      for (std::size_t j = 0; j < rel.cols(); ++j) s += rel(i, j).str() + ",";
    return s;
  }
};

enum class Move { T, S };

// Edge-level pullback of the move applied to `o`, before relabeling:
// row e' of the matrix expresses the value of the transported cochain on the
// new edge e' in terms of old edge values.
//
// T = [[1,1],[0,1]] recuts each sheared square; the new vertical edge through
// square i climbs the square to its left:
//   sigma'_i = sigma_i,   tau'_i = tau_{h^{-1}(i)} - sigma_{h^{-1}(i)},
// and the permutation pair becomes (h, v h^{-1}).
//
// S is the quarter rotation matching (h, v) -> (v, h^{-1}):
//   sigma'_i = tau_{h(i)},   tau'_i = -sigma_i.
inline IntMat move_edge_map(const Origami& o, Move m) {
  IntMat psi(2 * o.n, 2 * o.n);
  Permutation hi = o.h.inverse();
  for (int i = 0; i < o.n; ++i) {
    switch (m) {
      case Move::T:
        psi(sigma_index(o, i), sigma_index(o, i)) = 1;
        psi(tau_index(o, i), tau_index(o, hi(i))) = 1;
        psi(tau_index(o, i), sigma_index(o, hi(i))) = -1;
        break;
      case Move::S:
        psi(sigma_index(o, i), tau_index(o, o.h(i))) = 1;
        psi(tau_index(o, i), sigma_index(o, i)) = -1;
        break;
    }
  }
  return psi;
}

inline Origami move_raw_target(const Origami& o, Move m) {
  switch (m) {
    case Move::T:
      return Origami{o.n, o.h, o.v.compose(o.h.inverse()), o.label};
    case Move::S:
      return Origami{o.n, o.v, o.h.inverse(), o.label};
  }
  throw Error("unreachable");
}

// Vertical shear [[1,0],[1,1]], used to realize vertical multitwists:
// (h, v) -> (h v^{-1}, v), sigma'_i = sigma_{v^{-1}(i)} - tau_{v^{-1}(i)}.
inline IntMat vertical_edge_map(const Origami& o) {
  IntMat psi(2 * o.n, 2 * o.n);
  Permutation vi = o.v.inverse();
  for (int i = 0; i < o.n; ++i) {
    psi(tau_index(o, i), tau_index(o, i)) = 1;
    psi(sigma_index(o, i), sigma_index(o, vi(i))) = 1;
    psi(sigma_index(o, i), tau_index(o, vi(i))) = -1;
  }
  return psi;
}

inline Origami vertical_raw_target(const Origami& o) {
  return Origami{o.n, o.h.compose(o.v.inverse()), o.v, o.label};
}

// Half rotation: (h, v) -> (h^{-1}, v^{-1}), sigma'_i = -sigma_{v(i)},
// tau'_i = -tau_{h(i)}.
inline IntMat rotation_edge_map(const Origami& o) {
  IntMat psi(2 * o.n, 2 * o.n);
  for (int i = 0; i < o.n; ++i) {
    psi(sigma_index(o, i), sigma_index(o, o.v(i))) = -1;
    psi(tau_index(o, i), tau_index(o, o.h(i))) = -1;
  }
  return psi;
}

inline Origami rotation_raw_target(const Origami& o) {
  return Origami{o.n, o.h.inverse(), o.v.inverse(), o.label};
}

// Compose a relabeling into an edge map: the relabeled cochain value on edge
// pi(i) is the raw value on edge i.
inline IntMat relabel_edge_map(const Origami& raw_target, const Permutation& pi) {
  int n = raw_target.n;
  IntMat perm(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    perm(pi(i), i) = 1;
    perm(n + pi(i), n + i) = 1;
  }
  return perm;
}

// Rel-coordinate matrix of an edge-level pullback between two homology bases.
inline IntMat rel_matrix_of_edge_map(const IntMat& edge_map, const HomologyData& src,
                                     const HomologyData& tgt) {
  auto m = solve(to_rat(tgt.rel_basis), to_rat(edge_map * src.rel_basis));
  if (!m) throw Error("cocycle: edge map does not preserve the cocycle lattice");
  IntMat out(tgt.rel_rank, src.rel_rank);
  for (int i = 0; i < tgt.rel_rank; ++i)
    for (int j = 0; j < src.rel_rank; ++j) {
      if (den((*m)(i, j)) != 1) throw Error("cocycle: non-integral transport matrix");
      out(i, j) = num((*m)(i, j));
    }
  return out;
}

inline CocycleMatrix cocycle_of_edge_map(const IntMat& edge_map, const HomologyData& src,
                                         const HomologyData& tgt, const std::string& word) {
  IntMat rel = rel_matrix_of_edge_map(edge_map, src, tgt);
  // rel maps ker p into ker p, so it is block lower triangular; the abs block
  // is the top-left corner.
  for (int i = 0; i < tgt.abs_rank; ++i)
    for (int j = src.abs_rank; j < src.rel_rank; ++j)
      if (rel(i, j) != 0) throw Error("cocycle: transport does not preserve ker p");
  IntMat abs = rel.submatrix(0, 0, tgt.abs_rank, src.abs_rank);
  return CocycleMatrix{std::move(rel), std::move(abs), word};
}

struct MoveResult {
  Origami target;        // canonical form
  Permutation relabel;   // raw labels -> canonical labels
  CocycleMatrix cocycle; // source coords -> canonical target coords
};

inline MoveResult apply_move(const Origami& o, const HomologyData& hd_src, Move m,
                             const HomologyData* hd_tgt_hint = nullptr) {
  Origami raw = move_raw_target(o, m);
  Permutation pi;
  Origami target = canonical_form(raw, &pi);
  IntMat edge_map = relabel_edge_map(raw, pi) * move_edge_map(o, m);
  HomologyData hd_local;
  const HomologyData* hd_tgt = hd_tgt_hint;
  if (!hd_tgt) {
    hd_local = homology(target);
    hd_tgt = &hd_local;
  }
  std::string word = (m == Move::T) ? "T" : "S";
  return MoveResult{target, pi, cocycle_of_edge_map(edge_map, hd_src, *hd_tgt, word)};
}

inline std::pair<Origami, CocycleMatrix> act_T(const Origami& o) {
  HomologyData hd = homology(o);
  MoveResult r = apply_move(o, hd, Move::T);
  return {r.target, r.cocycle};
}

inline std::pair<Origami, CocycleMatrix> act_S(const Origami& o) {
  HomologyData hd = homology(o);
  MoveResult r = apply_move(o, hd, Move::S);
  return {r.target, r.cocycle};
}

}  // namespace sqtile
