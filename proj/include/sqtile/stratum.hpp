#pragma once

#include <algorithm>
#include <vector>

#include "sqtile/origami.hpp"

namespace sqtile {

struct StratumData {
  std::vector<int> kappa;  // cone orders, descending; 0 = marked regular point
  int genus = 0;
  int n_singularities = 0;
};

// Vertex classes of the square complex are the cycles of
//   c = v . h . v^{-1} . h^{-1}
// acting on square labels via their lower-left corners: starting in the
// sector of square i and turning counterclockwise around the vertex, the next
// square whose lower-left corner sits at the same vertex is c(i). One c-step
// passes four quarter-sectors, so a cycle of length l has cone angle 2*pi*l,
// i.e. cone order l - 1.
inline Permutation vertex_permutation(const Origami& o) {
  return o.v.compose(o.h).compose(o.v.inverse()).compose(o.h.inverse());
}

inline std::vector<std::vector<int>> vertex_classes(const Origami& o) {
  return vertex_permutation(o).cycles();
}

inline StratumData stratum(const Origami& o) {
  StratumData s;
  auto classes = vertex_classes(o);
  s.n_singularities = static_cast<int>(classes.size());
  for (const auto& c : classes) s.kappa.push_back(static_cast<int>(c.size()) - 1);
  std::sort(s.kappa.rbegin(), s.kappa.rend());
  int sum = 0;
  for (int k : s.kappa) sum += k;
  s.genus = (sum + 2) / 2;
  // Euler characteristic of the complex: V - E + F = s - 2n + n.
  int euler_genus = (2 - (s.n_singularities - o.n)) / 2;
  if (sum % 2 != 0 || euler_genus != s.genus)
    throw Error("stratum: genus bookkeeping failed (internal)");
  return s;
}

}  // namespace sqtile
