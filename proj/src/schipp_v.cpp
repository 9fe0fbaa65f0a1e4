#include "walshlab/schipp_v.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "walshlab/maximal.hpp"
#include "walshlab/parallel.hpp"

namespace walshlab {

namespace detail {

// Work on the level-n prefixes X (point) and T (integration variable). The
// indicator 1_{I_j}(t) keeps exactly the j <= n - bitlen(T), and with
// Z = X + T the inner sum is the prefix P_J(Z) = sum_{j<=J} 2^{j-1} g(Z + e_j).
// Grouping T by bit length b, the T with bitlen b sweep the half-block of size
// 2^{b-1} next to X, so each group is one block sum of P_{n-b}^2.
void v_level_squared(std::span<const double> averages, int n, std::span<double> out) {
  const std::size_t cells = std::size_t{1} << n;
  if (n == 0) {
    out[0] = 0.0;
    return;
  }
  std::vector<long double> prefix(cells, 0.0L);
  std::vector<long double> acc(cells, 0.0L);
  std::vector<long double> blocks;
  for (int j = 0; j < n; ++j) {
    const std::size_t flip = std::size_t{1} << (n - 1 - j);
    const long double weight = std::ldexp(1.0L, j - 1);
    for (std::size_t z = 0; z < cells; ++z) prefix[z] += weight * averages[z ^ flip];

    const int b = n - j;
    const int block_bits = b - 1;
    blocks.assign(cells >> block_bits, 0.0L);
    for (std::size_t z = 0; z < cells; ++z) blocks[z >> block_bits] += prefix[z] * prefix[z];
    const std::size_t sibling = std::size_t{1} << block_bits;
    for (std::size_t x = 0; x < cells; ++x) acc[x] += blocks[(x ^ sibling) >> block_bits];
  }
  for (std::size_t x = 0; x < cells; ++x) acc[x] += prefix[x] * prefix[x];
  for (std::size_t x = 0; x < cells; ++x) out[x] = static_cast<double>(std::ldexp(acc[x], -2 * n));
}

}  // namespace detail

namespace {

void check_level(int n, int resolution) {
  if (n < 0 || n > resolution) {
    throw std::out_of_range("V level " + std::to_string(n) + " outside [0, N]");
  }
}

std::vector<double> level_averages(const Grid1& f, int n) {
  const int shift = f.resolution() - n;
  std::vector<double> averages(std::size_t{1} << n, 0.0);
  const std::size_t width = std::size_t{1} << shift;
  for (std::size_t c = 0; c < averages.size(); ++c) {
    auto cell = f.values().subspan(c * width, width);
    averages[c] = std::ldexp(pairwise_sum(cell), -shift);
  }
  return averages;
}

}  // namespace

Grid1 v_n(const Grid1& f, int n) {
  check_level(n, f.resolution());
  const auto averages = level_averages(f, n);
  std::vector<double> squared(averages.size());
  detail::v_level_squared(averages, n, squared);
  const int shift = f.resolution() - n;
  std::vector<double> out(f.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = std::sqrt(squared[x >> shift]);
  return Grid1(f.resolution(), std::move(out));
}

VProfile v_profile(const Grid1& f) {
  VProfile profile;
  std::vector<double> best(f.size(), 0.0);
  for (int n = 0; n <= f.resolution(); ++n) {
    profile.levels.push_back(v_n(f, n));
    const auto level = profile.levels.back().values();
    for (std::size_t x = 0; x < best.size(); ++x) best[x] = std::max(best[x], level[x]);
  }
  profile.sup = Grid1(f.resolution(), std::move(best));
  return profile;
}

Grid1 v_sup(const Grid1& f) { return v_profile(f).sup; }

namespace {

// Runs the one-variable V construction on every slice; `levels` selects which
// n contribute to the pointwise maximum.
Grid2 hybrid_max_over(const Grid2& f, Axis axis, int n_first, int n_last) {
  const AxisPyramid pyramid(f, axis);
  const int top = f.resolution();
  const std::size_t side = f.side();
  std::vector<double> out(f.size(), 0.0);
  parallel_for(side, [&](std::size_t begin, std::size_t end) {
    std::vector<double> averages(side);
    std::vector<double> squared(side);
    std::vector<double> best(side);
    for (std::size_t frozen = begin; frozen < end; ++frozen) {
      std::fill(best.begin(), best.end(), 0.0);
      for (int n = n_first; n <= n_last; ++n) {
        const std::size_t cells = std::size_t{1} << n;
        pyramid.slice_averages(n, frozen, std::span(averages).first(cells));
        detail::v_level_squared(std::span(averages).first(cells), n, std::span(squared).first(cells));
        const int shift = top - n;
        for (std::size_t moving = 0; moving < side; ++moving) {
          best[moving] = std::max(best[moving], std::sqrt(squared[moving >> shift]));
        }
      }
      for (std::size_t moving = 0; moving < side; ++moving) {
        const std::size_t x = axis == Axis::X ? moving : frozen;
        const std::size_t y = axis == Axis::X ? frozen : moving;
        out[(x << top) | y] = best[moving];
      }
    }
  });
  return Grid2(top, std::move(out));
}

}  // namespace

Grid2 v_hybrid(const Grid2& f, int n, Axis axis) {
  check_level(n, f.resolution());
  return hybrid_max_over(f, axis, n, n);
}

Grid2 v_hybrid_sup(const Grid2& f, Axis axis) { return hybrid_max_over(f, axis, 0, f.resolution()); }

}  // namespace walshlab
