#pragma once

// Schipp's operator
//
//   V_n f(x) = ( 2^{-n} integral_G ( sum_{j<n} 2^{j-1} 1_{I_j}(t) S_{2^n} f(x + t + e_j) )^2 dt )^{1/2},
//   V f = sup_n V_n f,
//
// and its one-variable hybrids V_1 (acting in x, y frozen) and V_2 (acting in
// y, x frozen) on G x G.

#include <span>
#include <vector>

#include "walshlab/grid.hpp"

namespace walshlab {

/// Per-level values V_n f, n = 0..N, and their pointwise supremum.
struct VProfile {
  std::vector<Grid1> levels;
  Grid1 sup;
};

Grid1 v_n(const Grid1& f, int n);
Grid1 v_sup(const Grid1& f);
VProfile v_profile(const Grid1& f);

/// V_n in one variable of a Grid2, built on the marginal sums S^{(1)}_{2^n}
/// (axis X) or S^{(2)}_{2^n} (axis Y).
Grid2 v_hybrid(const Grid2& f, int n, Axis axis);
/// sup_n of v_hybrid, i.e. V_1(x, y, f) or V_2(x, y, f).
Grid2 v_hybrid_sup(const Grid2& f, Axis axis);

namespace detail {

/// Given the 2^n level-n cell averages g of a one-variable function, writes
/// (V_n f)^2 on every level-n cell into out. O(n 2^n).
void v_level_squared(std::span<const double> averages, int n, std::span<double> out);

}  // namespace detail

}  // namespace walshlab
