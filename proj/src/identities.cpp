#include "walshlab/identities.hpp"

#include <bit>
#include <algorithm>
#include <vector>


namespace walshlab {

int epsilon(int k, int j) {
  if (j < 0 || k < 0 || j > k) {
    throw std::invalid_argument("epsilon(k, j) needs 0 <= j <= k, got k=" + std::to_string(k) +
                                ", j=" + std::to_string(j));
  }
  return j == k ? 1 : -1;
}

namespace {

void check_schipp_args(std::uint64_t m, int n, DyadicPoint u) {
  if (n < 0 || n > u.resolution()) {
    throw std::out_of_range("Schipp level n must satisfy 0 <= n <= resolution");
  }
  if ((m >> n) != 0) {
    throw std::invalid_argument("Schipp representation needs m < 2^n (m=" + std::to_string(m) +
                                ", n=" + std::to_string(n) + ")");
  }
}

// Number of leading zero coordinates of u, i.e. the k with u in I_k \ I_{k+1}
// (or N when u is the null element).
int leading_zero_coordinates(DyadicPoint u) {
  const int resolution = u.resolution();
  if (u.code() == 0) return resolution;
  return resolution - std::bit_width(u.code());
}

}  // namespace

HalfInteger schipp_shell(std::uint64_t m, int n, DyadicPoint u, const EpsilonFn& eps) {
  check_schipp_args(m, n, u);
  const int resolution = u.resolution();
  const int k = leading_zero_coordinates(u);
  HalfInteger sum;
  if (k >= n) return sum;
  for (int j = 0; j <= k; ++j) {
    const Code shifted = u.code() ^ (Code{1} << (resolution - 1 - j));
    const int w = walsh_sign_reversed(m, bit_reverse(shifted, resolution));
    sum += HalfInteger::half_power_of_two(j) * (static_cast<std::int64_t>(eps(k, j)) * w);
  }
  return sum;
}

HalfInteger schipp_rhs(std::uint64_t m, int n, DyadicPoint u, const EpsilonFn& eps) {
  HalfInteger rhs = schipp_shell(m, n, u, eps);
  const int w = walsh_sign_reversed(m, bit_reverse(u.code(), u.resolution()));
  rhs -= HalfInteger::from_doubled(w);
  if (u.in_interval(n)) rhs += HalfInteger::from_doubled(2 * static_cast<std::int64_t>(m) + 1);
  return rhs;
}

std::int64_t dirichlet_value(std::uint64_t m, DyadicPoint u) {
  const int resolution = u.resolution();
  if (m > (std::uint64_t{1} << resolution)) throw std::out_of_range("kernel order exceeds 2^N");
  const Code reversed = bit_reverse(u.code(), resolution);
  std::int64_t sum = 0;
  for (std::uint64_t k = 0; k < m; ++k) sum += walsh_sign_reversed(k, reversed);
  return sum;
}

IdentityReport verify_schipp_identity(int n_max, const EpsilonFn& eps) {
  if (n_max < 0 || n_max > 12) throw std::out_of_range("verify_schipp_identity needs n_max <= 12");
  IdentityReport report;
  for (int n = 1; n <= n_max; ++n) {
    const Code points = Code{1} << n;
    for (Code code = 0; code < points; ++code) {
      const DyadicPoint u(code, n);
      const Code reversed = bit_reverse(code, n);
      // D_m(u) accumulated term by term as m increases.
      std::int64_t kernel = 0;
      for (std::uint64_t m = 0; m < points; ++m) {
        const HalfInteger rhs = schipp_rhs(m, n, u, eps);
        ++report.checked;
        if (rhs.doubled() == 2 * kernel) {
          ++report.passed;
        } else if (!report.first_failure) {
          report.first_failure = IdentityFailure{n, m, code, 2 * kernel, rhs.doubled()};
        }
        kernel += walsh_sign_reversed(m, reversed);
      }
    }
  }
  return report;
}

IdentityReport verify_dyadic_dirichlet(int n_max, std::optional<int> resolution) {
  if (n_max < 0 || n_max > 20) throw std::out_of_range("verify_dyadic_dirichlet needs n_max <= 20");
  const int bits = resolution.value_or(n_max);
  if (bits < n_max || bits > 24) {
    throw std::out_of_range("resolution must satisfy n_max <= N <= 24");
  }
  const std::size_t points = std::size_t{1} << bits;
  IdentityReport report;
  std::vector<std::int64_t> sums(points);
  for (int n = 0; n <= n_max; ++n) {
    // Integer butterfly: sums[v] = sum_{k < 2^n} (-1)^{popcount(k & v)}.
    std::fill(sums.begin(), sums.end(), 0);
    std::fill_n(sums.begin(), std::size_t{1} << n, 1);
    for (std::size_t h = 1; h < points; h <<= 1) {
      for (std::size_t i = 0; i < points; i += 2 * h) {
        for (std::size_t j = i; j < i + h; ++j) {
          const std::int64_t a = sums[j];
          const std::int64_t b = sums[j + h];
          sums[j] = a + b;
          sums[j + h] = a - b;
        }
      }
    }
    for (Code code = 0; code < points; ++code) {
      const DyadicPoint u(code, bits);
      const std::int64_t kernel = sums[bit_reverse(code, bits)];
      const std::int64_t expected = u.in_interval(n) ? (std::int64_t{1} << n) : 0;
      ++report.checked;
      if (kernel == expected) {
        ++report.passed;
      } else if (!report.first_failure) {
        report.first_failure = IdentityFailure{n, std::uint64_t{1} << n, code, 2 * kernel, 2 * expected};
      }
    }
  }
  return report;
}

}  // namespace walshlab
