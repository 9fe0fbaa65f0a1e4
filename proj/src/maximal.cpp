#include "walshlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "walshlab/parallel.hpp"

namespace walshlab {

CellPyramid::CellPyramid(const Grid2& f) : resolution_(f.resolution()) {
  const int top = resolution_;
  levels_.resize(static_cast<std::size_t>(top) + 1);
  levels_[top].assign(f.values().begin(), f.values().end());
  for (int n = top - 1; n >= 0; --n) {
    const std::size_t side = std::size_t{1} << n;
    const auto& fine = levels_[n + 1];
    auto& coarse = levels_[n];
    coarse.resize(side * side);
    for (std::size_t cx = 0; cx < side; ++cx) {
      for (std::size_t cy = 0; cy < side; ++cy) {
        const std::size_t r0 = (2 * cx) << (n + 1);
        const std::size_t r1 = (2 * cx + 1) << (n + 1);
        coarse[(cx << n) | cy] =
            (fine[r0 | (2 * cy)] + fine[r0 | (2 * cy + 1)]) + (fine[r1 | (2 * cy)] + fine[r1 | (2 * cy + 1)]);
      }
    }
  }
}

double CellPyramid::average_at(int level, std::size_t x, std::size_t y) const {
  const int shift = resolution_ - level;
  return std::ldexp(cell_sum(level, x >> shift, y >> shift), -2 * shift);
}

AxisPyramid::AxisPyramid(const Grid2& f, Axis axis) : resolution_(f.resolution()), axis_(axis) {
  const int top = resolution_;
  const std::size_t side = f.side();
  levels_.resize(static_cast<std::size_t>(top) + 1);
  auto& base = levels_[top];
  if (axis == Axis::X) {
    base.assign(f.values().begin(), f.values().end());
  } else {
    base.resize(f.size());
    for (std::size_t x = 0; x < side; ++x) {
      for (std::size_t y = 0; y < side; ++y) base[(y << top) | x] = f[(x << top) | y];
    }
  }
  for (int n = top - 1; n >= 0; --n) {
    const std::size_t cells = std::size_t{1} << n;
    const auto& fine = levels_[n + 1];
    auto& coarse = levels_[n];
    coarse.resize(cells * side);
    for (std::size_t c = 0; c < cells; ++c) {
      const double* a = fine.data() + ((2 * c) << top);
      const double* b = fine.data() + ((2 * c + 1) << top);
      double* out = coarse.data() + (c << top);
      for (std::size_t frozen = 0; frozen < side; ++frozen) out[frozen] = a[frozen] + b[frozen];
    }
  }
}

double AxisPyramid::average_at(int level, std::size_t x, std::size_t y) const {
  const int shift = resolution_ - level;
  const std::size_t moving = axis_ == Axis::X ? x : y;
  const std::size_t frozen = axis_ == Axis::X ? y : x;
  return std::ldexp(levels_[level][((moving >> shift) << resolution_) | frozen], -shift);
}

void AxisPyramid::slice_averages(int level, std::size_t frozen, std::span<double> out) const {
  const int shift = resolution_ - level;
  const std::size_t cells = std::size_t{1} << level;
  for (std::size_t c = 0; c < cells; ++c) {
    out[c] = std::ldexp(levels_[level][(c << resolution_) | frozen], -shift);
  }
}

namespace {

template <class Fn>
Grid2 pointwise(const Grid2& like, Fn&& value_at) {
  const std::size_t side = like.side();
  const int bits = like.resolution();
  std::vector<double> out(like.size());
  parallel_for(side, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t y = 0; y < side; ++y) out[(x << bits) | y] = value_at(x, y);
    }
  });
  return Grid2(bits, std::move(out));
}

}  // namespace

Grid2 dyadic_maximal(const Grid2& f) {
  const CellPyramid pyramid(f);
  const int top = f.resolution();
  return pointwise(f, [&](std::size_t x, std::size_t y) {
    double best = 0.0;
    for (int n = 0; n <= top; ++n) best = std::max(best, std::abs(pyramid.average_at(n, x, y)));
    return best;
  });
}

Grid2 dyadic_maximal_abs(const Grid2& f) { return dyadic_maximal(abs(f)); }

Grid1 dyadic_maximal(const Grid1& g) {
  const int top = g.resolution();
  std::vector<double> sums(g.values().begin(), g.values().end());
  std::vector<double> best(g.size(), 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) best[u] = std::abs(g[u]);
  // Coarsen in place: after the step for level n, sums[c] is the level-n sum.
  for (int n = top - 1; n >= 0; --n) {
    const std::size_t cells = std::size_t{1} << n;
    for (std::size_t c = 0; c < cells; ++c) sums[c] = sums[2 * c] + sums[2 * c + 1];
    const int shift = top - n;
    for (std::size_t u = 0; u < g.size(); ++u) {
      best[u] = std::max(best[u], std::abs(std::ldexp(sums[u >> shift], -shift)));
    }
  }
  return Grid1(top, std::move(best));
}

Grid2 hybrid_maximal(const Grid2& f, Axis axis) {
  const AxisPyramid pyramid(abs(f), axis);
  const int top = f.resolution();
  return pointwise(f, [&](std::size_t x, std::size_t y) {
    double best = 0.0;
    for (int n = 0; n <= top; ++n) best = std::max(best, pyramid.average_at(n, x, y));
    return best;
  });
}

Grid2 shear(const Grid2& f) {
  return pointwise(f, [&](std::size_t x, std::size_t y) { return f[(x << f.resolution()) | (y ^ x)]; });
}

Grid2 diagonal_average(const Grid2& f, int j) {
  if (j < 0 || j > f.resolution()) {
    throw std::out_of_range("diagonal average level " + std::to_string(j) + " outside [0, N]");
  }
  // f(x + s, y + s) = F_2(x + s, x + y), so A_j is the level-j x-average of
  // |F_2| read at (x, x + y).
  const AxisPyramid pyramid(abs(shear(f)), Axis::X);
  return pointwise(f, [&](std::size_t x, std::size_t y) { return pyramid.average_at(j, x, x ^ y); });
}

Grid2 diagonal_maximal(const Grid2& f) {
  const AxisPyramid pyramid(abs(shear(f)), Axis::X);
  const int top = f.resolution();
  return pointwise(f, [&](std::size_t x, std::size_t y) {
    double best = 0.0;
    for (int j = 0; j <= top; ++j) best = std::max(best, pyramid.average_at(j, x, x ^ y));
    return best;
  });
}

}  // namespace walshlab
