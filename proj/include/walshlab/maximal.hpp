#pragma once

// Dyadic maximal operators on G x G.
//
// All suprema run over levels 0 <= n <= N. For level-N step data that is the
// full supremum, since finer averages repeat the cell value.

#include <cstddef>
#include <vector>

#include "walshlab/grid.hpp"

namespace walshlab {

/// Sums of f over square dyadic cells I_n(x) x I_n(y) for every level n <= N.
class CellPyramid {
 public:
  explicit CellPyramid(const Grid2& f);

  [[nodiscard]] int resolution() const noexcept { return resolution_; }
  /// Sum of the grid values in the level-n square cell (cx, cy), cx, cy < 2^n.
  [[nodiscard]] double cell_sum(int level, std::size_t cx, std::size_t cy) const {
    return levels_[level][(cx << level) | cy];
  }
  /// Average of f over the level-n square cell containing the point (x, y).
  [[nodiscard]] double average_at(int level, std::size_t x, std::size_t y) const;

 private:
  int resolution_;
  std::vector<std::vector<double>> levels_;
};

/// Sums of f over one-variable dyadic cells: along X the level-n entry for
/// (cx, y) sums f(x', y) over x' in the level-n cell cx, y frozen.
class AxisPyramid {
 public:
  AxisPyramid(const Grid2& f, Axis axis);

  [[nodiscard]] int resolution() const noexcept { return resolution_; }
  [[nodiscard]] Axis axis() const noexcept { return axis_; }
  /// Average over the level-n cell (along the pyramid axis) containing (x, y).
  [[nodiscard]] double average_at(int level, std::size_t x, std::size_t y) const;
  /// Level-n averages of the one-variable slice through the frozen coordinate,
  /// written to out (2^n entries).
  void slice_averages(int level, std::size_t frozen, std::span<double> out) const;

 private:
  int resolution_;
  Axis axis_;
  // levels_[n][(c << N) | frozen] with c < 2^n.
  std::vector<std::vector<double>> levels_;
};

/// Mf(x, y) = max_n |average of f over the level-n square cell of (x, y)|.
/// The absolute value is taken outside the (signed) average.
Grid2 dyadic_maximal(const Grid2& f);

/// M|f|: the same operator applied to |f|, which is the form that bounds
/// averages of |f|.
Grid2 dyadic_maximal_abs(const Grid2& f);

/// One-variable dyadic maximal function max_n |average over I_n(x)| of g.
Grid1 dyadic_maximal(const Grid1& g);

/// M_1 (axis X) or M_2 (axis Y): max_n of the level-n average of |f| in one
/// variable, the other frozen.
Grid2 hybrid_maximal(const Grid2& f, Axis axis);

/// F_2(u, v) = f(u, v + u). An involution.
Grid2 shear(const Grid2& f);

/// A_j(x, y) = 2^j integral_{I_j} |f(x + s, y + s)| ds, 0 <= j <= N.
Grid2 diagonal_average(const Grid2& f, int j);

/// A(x, y) = max_j A_j(x, y).
Grid2 diagonal_maximal(const Grid2& f);

}  // namespace walshlab
