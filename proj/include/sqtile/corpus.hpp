#pragma once

#include "sqtile/origami.hpp"

namespace sqtile {

// The bundled examples: the square torus, the L-shaped 3-square surface in
// H(2), the 8-square Wollmilchsau in H(1,1,1,1), and two seeded random
// transitive origamis.
inline std::vector<Origami> bundled_corpus() {
  std::vector<Origami> out;
  out.push_back(build_origami(Permutation(1), Permutation(1), "torus"));
  out.push_back(build_origami(Permutation::from_cycles(3, {{1, 2}}),
                              Permutation::from_cycles(3, {{1, 3}}), "l-shaped"));
  out.push_back(build_origami(Permutation::from_cycles(8, {{1, 2, 3, 4}, {5, 6, 7, 8}}),
                              Permutation::from_cycles(8, {{1, 5, 3, 7}, {2, 8, 4, 6}}),
                              "wollmilchsau"));
  out.push_back(random_transitive_origami(6, 20240601, "random-6"));
  out.push_back(random_transitive_origami(10, 20240602, "random-10"));
  return out;
}

inline Origami corpus_entry(const std::string& name) {
  for (auto& o : bundled_corpus())
    if (o.label == name) return o;
  throw ParseError("unknown corpus entry: " + name);
}

}  // namespace sqtile
