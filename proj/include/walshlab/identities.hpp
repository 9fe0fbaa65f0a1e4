#pragma once

// Exact checks of two Walsh-Dirichlet kernel identities:
//
//   D_{2^n}(x) = 2^n 1_{I_n}(x)
//
// and Schipp's representation, valid for m < 2^n,
//
//   D_m(x) = sum_{k<n} 1_{I_k \ I_{k+1}}(x) sum_{j<=k} eps_{kj} 2^{j-1} w_m(x + e_j)
//            - w_m(x) / 2 + (m + 1/2) 1_{I_n}(x),
//
// with eps_{kj} = +1 for j = k and -1 for j < k. Everything is carried in
// doubled integers so both sides compare with zero tolerance.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "walshlab/dyadic.hpp"

namespace walshlab {

/// Exact value doubled / 2.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_doubled(std::int64_t doubled) {
    HalfInteger h;
    h.doubled_ = doubled;
    return h;
  }
  static constexpr HalfInteger from_integer(std::int64_t value) { return from_doubled(2 * value); }
  /// 2^{e-1}, e >= 0.
  static constexpr HalfInteger half_power_of_two(int e) {
    return from_doubled(std::int64_t{1} << e);
  }

  [[nodiscard]] constexpr std::int64_t doubled() const noexcept { return doubled_; }
  [[nodiscard]] constexpr double to_double() const noexcept { return 0.5 * static_cast<double>(doubled_); }
  [[nodiscard]] constexpr bool is_integer() const noexcept { return doubled_ % 2 == 0; }

  constexpr HalfInteger& operator+=(HalfInteger o) { doubled_ += o.doubled_; return *this; }
  constexpr HalfInteger& operator-=(HalfInteger o) { doubled_ -= o.doubled_; return *this; }
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return a += b; }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return a -= b; }
  friend constexpr HalfInteger operator-(HalfInteger a) { return from_doubled(-a.doubled_); }
  friend constexpr HalfInteger operator*(HalfInteger a, std::int64_t k) { return from_doubled(a.doubled_ * k); }
  friend constexpr HalfInteger operator*(std::int64_t k, HalfInteger a) { return a * k; }
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

 private:
  std::int64_t doubled_ = 0;
};

/// eps_{kj}: +1 if j == k, -1 if j < k. Throws for j > k or negative indices.
int epsilon(int k, int j);

using EpsilonFn = std::function<int(int, int)>;

/// The shell part sum_{k<n} 1_{I_k \ I_{k+1}}(u) sum_{j<=k} eps_{kj} 2^{j-1} w_m(u + e_j).
/// u may have any resolution N >= n; e_j flips coordinate j at that resolution.
HalfInteger schipp_shell(std::uint64_t m, int n, DyadicPoint u, const EpsilonFn& eps = epsilon);

/// Full right-hand side of Schipp's representation. Requires m < 2^n <= 2^N.
HalfInteger schipp_rhs(std::uint64_t m, int n, DyadicPoint u, const EpsilonFn& eps = epsilon);

/// D_m(u) by direct summation of Walsh signs.
std::int64_t dirichlet_value(std::uint64_t m, DyadicPoint u);

struct IdentityFailure {
  int n = 0;
  std::uint64_t m = 0;
  Code code = 0;
  std::int64_t lhs_doubled = 0;
  std::int64_t rhs_doubled = 0;
};

struct IdentityReport {
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::optional<IdentityFailure> first_failure;

  [[nodiscard]] bool ok() const { return checked == passed; }
};

/// Checks schipp_rhs(m, n, u) == D_m(u) for 1 <= n <= n_max, m < 2^n and all
/// u at resolution n. n_max <= 12.
IdentityReport verify_schipp_identity(int n_max, const EpsilonFn& eps = epsilon);

/// Checks D_{2^n}(u) == 2^n 1_{I_n}(u) for 0 <= n <= n_max and all u at the
/// given resolution (defaults to n_max). n_max <= 20.
IdentityReport verify_dyadic_dirichlet(int n_max, std::optional<int> resolution = std::nullopt);

}  // namespace walshlab
