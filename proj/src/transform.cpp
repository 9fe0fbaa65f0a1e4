#include "walshlab/transform.hpp"

#include <algorithm>
#include <string>

#include "walshlab/parallel.hpp"

namespace walshlab {

namespace detail {

void hadamard_in_place(double* data, int bits, std::size_t stride) {
  const std::size_t n = std::size_t{1} << bits;
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        double& a = data[j * stride];
        double& b = data[(j + h) * stride];
        const double x = a;
        const double y = b;
        a = x + y;
        b = x - y;
      }
    }
  }
}

}  // namespace detail

namespace {

std::vector<Code> reversal_table(int bits) {
  std::vector<Code> table(std::size_t{1} << bits);
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = bit_reverse(static_cast<Code>(i), bits);
  }
  return table;
}

// Butterflies between whole rows of a row-major side x side array, restricted
// to columns [col_begin, col_end). Equivalent to a Hadamard transform along x.
void hadamard_columns(double* data, int bits, std::size_t col_begin, std::size_t col_end) {
  const std::size_t side = std::size_t{1} << bits;
  for (std::size_t h = 1; h < side; h <<= 1) {
    for (std::size_t i = 0; i < side; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        double* a = data + j * side;
        double* b = data + (j + h) * side;
        for (std::size_t c = col_begin; c < col_end; ++c) {
          const double x = a[c];
          const double y = b[c];
          a[c] = x + y;
          b[c] = x - y;
        }
      }
    }
  }
}

void hadamard_all_rows(std::vector<double>& data, int bits) {
  const std::size_t side = std::size_t{1} << bits;
  parallel_for(side, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) detail::hadamard_in_place(data.data() + x * side, bits, 1);
  });
}

void hadamard_all_columns(std::vector<double>& data, int bits) {
  const std::size_t side = std::size_t{1} << bits;
  parallel_for(side, [&](std::size_t begin, std::size_t end) {
    hadamard_columns(data.data(), bits, begin, end);
  });
}

// out[(a << N) | b] = in[(rev a << N) | rev b]; an involution.
std::vector<double> reverse_both_axes(std::span<const double> in, int bits) {
  const std::size_t side = std::size_t{1} << bits;
  const auto rev = reversal_table(bits);
  std::vector<double> out(in.size());
  parallel_for(side, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const double* src = in.data() + static_cast<std::size_t>(rev[a]) * side;
      double* dst = out.data() + a * side;
      for (std::size_t b = 0; b < side; ++b) dst[b] = src[rev[b]];
    }
  });
  return out;
}

// 1D transform along one axis of a 2D array (no normalization), including the
// bit-reversal on the transformed axis only.
void forward_along_axis(std::vector<double>& data, int bits, Axis axis) {
  const std::size_t side = std::size_t{1} << bits;
  const auto rev = reversal_table(bits);
  std::vector<double> tmp(data.size());
  if (axis == Axis::Y) {
    for (std::size_t x = 0; x < side; ++x) {
      for (std::size_t y = 0; y < side; ++y) tmp[x * side + y] = data[x * side + rev[y]];
    }
    data.swap(tmp);
    hadamard_all_rows(data, bits);
  } else {
    for (std::size_t x = 0; x < side; ++x) {
      std::copy_n(data.data() + static_cast<std::size_t>(rev[x]) * side, side, tmp.data() + x * side);
    }
    data.swap(tmp);
    hadamard_all_columns(data, bits);
  }
}

void inverse_along_axis(std::vector<double>& data, int bits, Axis axis) {
  const std::size_t side = std::size_t{1} << bits;
  const auto rev = reversal_table(bits);
  std::vector<double> tmp(data.size());
  if (axis == Axis::Y) {
    hadamard_all_rows(data, bits);
    for (std::size_t x = 0; x < side; ++x) {
      for (std::size_t y = 0; y < side; ++y) tmp[x * side + y] = data[x * side + rev[y]];
    }
  } else {
    hadamard_all_columns(data, bits);
    for (std::size_t x = 0; x < side; ++x) {
      std::copy_n(data.data() + static_cast<std::size_t>(rev[x]) * side, side, tmp.data() + x * side);
    }
  }
  data.swap(tmp);
}

void scale(std::vector<double>& data, double factor) {
  for (double& v : data) v *= factor;
}

void check_count(std::uint64_t count, int resolution, const char* what) {
  if (count > (std::uint64_t{1} << resolution)) {
    throw std::out_of_range(std::string(what) + " " + std::to_string(count) +
                            " exceeds 2^N for N = " + std::to_string(resolution));
  }
}

}  // namespace

Spectrum1 fwht_forward(const Grid1& g) {
  const int bits = g.resolution();
  const auto rev = reversal_table(bits);
  std::vector<double> data(g.size());
  for (std::size_t v = 0; v < data.size(); ++v) data[v] = g[rev[v]];
  detail::hadamard_in_place(data.data(), bits, 1);
  scale(data, std::ldexp(1.0, -bits));
  return Spectrum1(bits, std::move(data));
}

Grid1 fwht_inverse(const Spectrum1& c) {
  const int bits = c.resolution();
  const auto rev = reversal_table(bits);
  std::vector<double> data(c.values().begin(), c.values().end());
  detail::hadamard_in_place(data.data(), bits, 1);
  std::vector<double> out(data.size());
  for (std::size_t u = 0; u < out.size(); ++u) out[u] = data[rev[u]];
  return Grid1(bits, std::move(out));
}

Spectrum2 fwht_forward_2d(const Grid2& f) {
  const int bits = f.resolution();
  auto data = reverse_both_axes(f.values(), bits);
  hadamard_all_rows(data, bits);
  hadamard_all_columns(data, bits);
  scale(data, std::ldexp(1.0, -2 * bits));
  return Spectrum2(bits, std::move(data));
}

Grid2 fwht_inverse_2d(const Spectrum2& c) {
  const int bits = c.resolution();
  std::vector<double> data(c.values().begin(), c.values().end());
  hadamard_all_rows(data, bits);
  hadamard_all_columns(data, bits);
  return Grid2(bits, reverse_both_axes(data, bits));
}

Grid2 partial_sum_rect(const Grid2& f, std::uint64_t m, std::uint64_t k) {
  const int bits = f.resolution();
  check_count(m, bits, "row count");
  check_count(k, bits, "column count");
  auto coeffs = std::move(fwht_forward_2d(f)).take_values();
  const std::size_t side = f.side();
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      if (i >= m || j >= k) coeffs[i * side + j] = 0.0;
    }
  }
  return fwht_inverse_2d(Spectrum2(bits, std::move(coeffs)));
}

Grid2 marginal_partial_sum(const Grid2& f, std::uint64_t n, Axis axis) {
  const int bits = f.resolution();
  check_count(n, bits, "partial sum length");
  const std::size_t side = f.side();
  std::vector<double> data(f.values().begin(), f.values().end());
  forward_along_axis(data, bits, axis);
  for (std::size_t x = 0; x < side; ++x) {
    for (std::size_t y = 0; y < side; ++y) {
      const std::size_t frequency = axis == Axis::X ? x : y;
      if (frequency >= n) data[x * side + y] = 0.0;
    }
  }
  inverse_along_axis(data, bits, axis);
  scale(data, std::ldexp(1.0, -bits));
  return Grid2(bits, std::move(data));
}

Grid1 partial_sum(const Grid1& g, std::uint64_t n) {
  check_count(n, g.resolution(), "partial sum length");
  auto coeffs = std::move(fwht_forward(g)).take_values();
  for (std::size_t i = n; i < coeffs.size(); ++i) coeffs[i] = 0.0;
  return fwht_inverse(Spectrum1(g.resolution(), std::move(coeffs)));
}

Grid1 dirichlet_kernel(std::uint64_t m, int resolution) {
  check_resolution(resolution);
  check_count(m, resolution, "kernel order");
  std::vector<double> coeffs(std::size_t{1} << resolution, 0.0);
  std::fill_n(coeffs.begin(), m, 1.0);
  return fwht_inverse(Spectrum1(resolution, std::move(coeffs)));
}

Grid1 walsh_function(std::uint64_t n, int resolution) {
  check_resolution(resolution);
  if ((n >> resolution) != 0) throw std::out_of_range("frequency out of range");
  std::vector<double> out(std::size_t{1} << resolution);
  for (std::size_t u = 0; u < out.size(); ++u) {
    out[u] = walsh_sign_reversed(n, bit_reverse(static_cast<Code>(u), resolution));
  }
  return Grid1(resolution, std::move(out));
}

}  // namespace walshlab
