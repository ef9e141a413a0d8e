#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "sqtile/moves.hpp"

namespace sqtile {

enum class Direction { Horizontal, Vertical };

// A cylinder of a unit-square origami in a coordinate direction: the squares
// of one h-cycle (horizontal) or v-cycle (vertical), height 1.
struct Cylinder {
  Direction direction;
  int circumference = 0;
  int height = 1;
  std::vector<int> squares;  // the cycle
  // Absolute coordinates of the Poincare dual of the core curve: pairing
  // against it evaluates cocycles on the core cycle (up to the orientation
  // built into the edge pairing).
  IntVec core_class;
};

inline std::vector<Cylinder> cylinders(const Origami& o, const HomologyData& hd,
                                       Direction dir) {
  const Permutation& p = (dir == Direction::Horizontal) ? o.h : o.v;
  std::vector<Cylinder> out;
  for (auto& cyc : p.cycles()) {
    Cylinder c;
    c.direction = dir;
    c.circumference = static_cast<int>(cyc.size());
    c.squares = cyc;
    IntVec dual(2 * o.n, Int(0));
    for (int i : cyc) {
      if (dir == Direction::Horizontal)
        dual[tau_index(o, i)] = 1;  // indicator on the crossing edges
      else
        dual[sigma_index(o, i)] = 1;
    }
    IntVec coords = hd.coords_int(dual);
    c.core_class = IntVec(coords.begin(), coords.begin() + hd.abs_rank);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<Cylinder> cylinders(const Origami& o, Direction dir) {
  HomologyData hd = homology(o);
  return cylinders(o, hd, dir);
}

// Multitwist in a coordinate direction: the Dehn multitwist in all parallel
// cylinders with powers k_C = lcm / circumference_C, i.e. the full shear
// (act_T or its vertical analogue) iterated lcm times. Built directly at the
// edge level:
//   horizontal: value on tau_i decreases by k_C * (value of the cochain on
//               the core cycle of the cylinder through i); sigma fixed.
//   vertical:   same with sigma and tau exchanged.
inline CocycleMatrix multitwist_matrix(const Origami& o, const HomologyData& hd,
                                       Direction dir) {
  const Permutation& p = (dir == Direction::Horizontal) ? o.h : o.v;
  auto cycles = p.cycles();
  long lcm = 1;
  for (auto& c : cycles) lcm = std::lcm(lcm, static_cast<long>(c.size()));

  IntMat psi = IntMat::identity(2 * o.n);
  for (auto& cyc : cycles) {
    Int k = Int(lcm / static_cast<long>(cyc.size()));
    for (int i : cyc)
      for (int j : cyc) {
        if (dir == Direction::Horizontal)
          psi(tau_index(o, i), sigma_index(o, j)) -= k;
        else
          psi(sigma_index(o, i), tau_index(o, j)) -= k;
      }
  }
  std::string word = (dir == Direction::Horizontal ? "T^" : "U^") + std::to_string(lcm);
  return cocycle_of_edge_map(psi, hd, hd, word);
}

inline long twist_lcm(const Origami& o, Direction dir) {
  const Permutation& p = (dir == Direction::Horizontal) ? o.h : o.v;
  long lcm = 1;
  for (auto& c : p.cycles()) lcm = std::lcm(lcm, static_cast<long>(c.size()));
  return lcm;
}

}  // namespace sqtile
