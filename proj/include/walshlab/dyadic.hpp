#pragma once

// Points of the Walsh group truncated to N coordinates, and the Walsh-Paley
// characters evaluated on them.
//
// A point x = (x_0, x_1, ..., x_{N-1}) is packed MSB-first: coordinate x_k
// lives in bit (N-1-k) of the code. With this layout the dyadic interval
// I_n(x) is the contiguous range of codes sharing the top n bits, and
// code / 2^N is the usual embedding of the point into [0, 1).

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace walshlab {

inline constexpr int kMaxResolution = 30;

using Code = std::uint32_t;

inline void check_resolution(int resolution) {
  if (resolution < 0 || resolution > kMaxResolution) {
    throw std::out_of_range("resolution " + std::to_string(resolution) +
                            " outside [0, 30]");
  }
}

/// Reverses the low `bits` bits of `value`.
constexpr Code bit_reverse(Code value, int bits) noexcept {
  Code out = 0;
  for (int i = 0; i < bits; ++i) {
    out = (out << 1) | ((value >> i) & 1u);
  }
  return out;
}

/// |n|: position of the highest set bit, so 2^|n| <= n < 2^(|n|+1). n > 0.
constexpr int highest_bit(std::uint64_t n) {
  if (n == 0) throw std::domain_error("highest_bit(0) is undefined");
  return 63 - std::countl_zero(n);
}

class DyadicPoint {
 public:
  constexpr DyadicPoint() = default;
  DyadicPoint(Code code, int resolution) : code_(code), resolution_(resolution) {
    check_resolution(resolution);
    if (resolution < 32 && (static_cast<std::uint64_t>(code) >> resolution) != 0) {
      throw std::out_of_range("point code " + std::to_string(code) +
                              " does not fit resolution " + std::to_string(resolution));
    }
  }

  /// e_j: the point whose only nonzero coordinate is x_j.
  static DyadicPoint unit(int j, int resolution) {
    check_resolution(resolution);
    if (j < 0 || j >= resolution) {
      throw std::out_of_range("e_" + std::to_string(j) + " needs resolution > j");
    }
    return DyadicPoint(Code{1} << (resolution - 1 - j), resolution);
  }

  [[nodiscard]] constexpr Code code() const noexcept { return code_; }
  [[nodiscard]] constexpr int resolution() const noexcept { return resolution_; }

  /// Coordinate x_k in {0, 1}.
  [[nodiscard]] int coordinate(int k) const {
    if (k < 0 || k >= resolution_) throw std::out_of_range("coordinate index out of range");
    return static_cast<int>((code_ >> (resolution_ - 1 - k)) & 1u);
  }

  /// True iff the point lies in I_n = I_n(0), i.e. x_0 = ... = x_{n-1} = 0.
  [[nodiscard]] bool in_interval(int n) const {
    if (n < 0 || n > resolution_) throw std::out_of_range("interval level out of range");
    return n == 0 || (code_ >> (resolution_ - n)) == 0;
  }

  /// Index of the level-n dyadic interval containing the point.
  [[nodiscard]] Code cell(int n) const {
    if (n < 0 || n > resolution_) throw std::out_of_range("interval level out of range");
    return n == 0 ? 0 : code_ >> (resolution_ - n);
  }

  friend DyadicPoint operator+(DyadicPoint a, DyadicPoint b) {
    if (a.resolution_ != b.resolution_) {
      throw std::invalid_argument("group addition needs equal resolutions");
    }
    DyadicPoint r;
    r.code_ = a.code_ ^ b.code_;
    r.resolution_ = a.resolution_;
    return r;
  }

  friend constexpr bool operator==(DyadicPoint, DyadicPoint) = default;

 private:
  Code code_ = 0;
  int resolution_ = 0;
};

/// w_n(u) as +1 / -1. Requires n < 2^N with N = u.resolution().
int walsh_value(std::uint64_t n, DyadicPoint u);

/// r_k(u) = (-1)^{x_k}.
int rademacher(int k, DyadicPoint u);

/// Hot-path form of walsh_value: the frequency is checked by the caller and
/// `reversed` is bit_reverse(code, N).
constexpr int walsh_sign_reversed(std::uint64_t n, Code reversed) noexcept {
  return (std::popcount(n & reversed) & 1) ? -1 : 1;
}

}  // namespace walshlab
