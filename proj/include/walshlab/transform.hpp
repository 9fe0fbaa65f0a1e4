#pragma once

// Fast Walsh-Paley transforms, rectangular and marginal partial sums, and
// Walsh-Dirichlet kernels.

#include <cstdint>

#include "walshlab/grid.hpp"

namespace walshlab {

/// Fourier coefficients 2^{-N} sum_u g(u) w_i(u), O(N 2^N).
Spectrum1 fwht_forward(const Grid1& g);
/// sum_i c(i) w_i(u); exact inverse of fwht_forward.
Grid1 fwht_inverse(const Spectrum1& c);

/// Coefficients f^(i, j) with respect to w_i(x) w_j(y).
Spectrum2 fwht_forward_2d(const Grid2& f);
Grid2 fwht_inverse_2d(const Spectrum2& c);

/// S_{M,K} f = sum_{i<M} sum_{j<K} f^(i,j) w_i(x) w_j(y), 0 <= M, K <= 2^N.
Grid2 partial_sum_rect(const Grid2& f, std::uint64_t m, std::uint64_t k);

/// S_n^{(1)} (axis X) or S_n^{(2)} (axis Y): partial sum in one variable with
/// the other frozen, 0 <= n <= 2^N.
Grid2 marginal_partial_sum(const Grid2& f, std::uint64_t n, Axis axis);

/// S_n g for a one-variable function, 0 <= n <= 2^N.
Grid1 partial_sum(const Grid1& g, std::uint64_t n);

/// D_m(u) = sum_{k<m} w_k(u) on every point of resolution N, m <= 2^N.
/// Values are integers and are computed exactly.
Grid1 dirichlet_kernel(std::uint64_t m, int resolution);

/// Sampled w_n on resolution N.
Grid1 walsh_function(std::uint64_t n, int resolution);

namespace detail {
/// In-place unnormalized Hadamard butterfly on 2^bits entries with stride.
void hadamard_in_place(double* data, int bits, std::size_t stride);
}  // namespace detail

}  // namespace walshlab
