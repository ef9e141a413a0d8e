#pragma once

#include <array>

#include "sqtile/homology.hpp"

namespace sqtile {

// Real and imaginary period rows of g.(unit-square form) in the fixed
// relative basis of hd.
struct PeriodCoordinates {
  std::vector<double> x_row, y_row;
  double det_g = 1.0;
  double area = 0.0;  // = n_squares * det_g
};

using Mat2 = std::array<std::array<double, 2>, 2>;

inline PeriodCoordinates period_matrix(const Origami& o, const HomologyData& hd,
                                       const Mat2& g) {
  double det_g = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (det_g <= 0.0) throw SingularMatrix("period_matrix: det(g) must be positive");

  // The deformed form has holonomy g.(1,0) on sigma edges, g.(0,1) on tau.
  std::vector<double> dx(2 * o.n), dy(2 * o.n);
  for (int i = 0; i < o.n; ++i) {
    dx[sigma_index(o, i)] = g[0][0];
    dx[tau_index(o, i)] = g[0][1];
    dy[sigma_index(o, i)] = g[1][0];
    dy[tau_index(o, i)] = g[1][1];
  }
  PeriodCoordinates pc;
  pc.det_g = det_g;
  pc.x_row = hd.coords_double(dx);
  pc.y_row = hd.coords_double(dy);
  // Area via the symplectic pairing of the two period classes.
  double area = 0.0;
  for (int t = 0; t + 1 < hd.abs_rank; t += 2)
    area += pc.x_row[t] * pc.y_row[t + 1] - pc.x_row[t + 1] * pc.y_row[t];
  pc.area = area;
  return pc;
}

// Exact variant for rational g, used by tests.
inline std::array<RatVec, 2> period_rows_exact(const Origami& o, const HomologyData& hd,
                                               const std::array<std::array<Rat, 2>, 2>& g) {
  Rat det_g = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (det_g <= 0) throw SingularMatrix("period_rows_exact: det(g) must be positive");
  RatVec dx(2 * o.n), dy(2 * o.n);
  for (int i = 0; i < o.n; ++i) {
    dx[sigma_index(o, i)] = g[0][0];
    dx[tau_index(o, i)] = g[0][1];
    dy[sigma_index(o, i)] = g[1][0];
    dy[tau_index(o, i)] = g[1][1];
  }
  return {hd.coords_checked(dx), hd.coords_checked(dy)};
}

}  // namespace sqtile
