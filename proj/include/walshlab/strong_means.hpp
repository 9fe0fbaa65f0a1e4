#pragma once

// Quadratic partial sums S_mm f and the means built from them.
//
// Two families are kept apart on purpose:
//   raw:      H_n^p f = (2^{-n} sum_{m<2^n} |S_mm f|^p)^{1/p}     (dyadic blocks)
//   centered: (1/n sum_{m<n} |S_mm f - f|^p)^{1/p}                (any n)

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "walshlab/grid.hpp"
#include "walshlab/report.hpp"

namespace walshlab {

/// Streams S_00 f, S_11 f, S_22 f, ... with an O(4^N) rank-one border update
/// per step. Past m = 2^N the sums stay equal to f (a level-N step function
/// has no higher frequencies).
class DiagonalSweep {
 public:
  explicit DiagonalSweep(const Grid2& f);

  /// m such that current() holds S_mm f.
  [[nodiscard]] std::uint64_t index() const noexcept { return m_; }
  [[nodiscard]] std::span<const double> current() const noexcept { return sum_; }
  [[nodiscard]] Grid2 current_grid() const { return Grid2(resolution_, sum_); }
  [[nodiscard]] int resolution() const noexcept { return resolution_; }

  /// S_mm -> S_{m+1,m+1}.
  void advance();

 private:
  int resolution_;
  std::uint64_t m_ = 0;
  std::vector<double> coeffs_;
  std::vector<double> sum_;
  std::vector<double> row_buffer_;
  std::vector<double> column_buffer_;
  std::vector<double> walsh_buffer_;
};

/// All S_mm f for 0 <= m < m_max, m_max <= 2^N.
std::vector<Grid2> diagonal_sweep(const Grid2& f, std::uint64_t m_max);

/// H_n^p f for block exponent 0 <= n <= N and p in (0, 2].
Grid2 strong_mean(const Grid2& f, int n, double p);

/// H_*^p f = max_{0<=n<=N} H_n^p f.
Grid2 maximal_strong(const Grid2& f, double p);

/// H_n^p f for every n = 0..N from one sweep.
std::vector<Grid2> strong_mean_levels(const Grid2& f, double p);

/// (1/n sum_{m<n} |S_mm f - f|^p)^{1/p}, n >= 1, p > 0.
Grid2 centered_strong_mean(const Grid2& f, std::uint64_t n_terms, double p);

struct PhiSpec {
  enum class Kind { Power, Exponential };
  Kind kind = Kind::Power;
  /// Exponent p for t^p, or rate A for exp(A t) - 1. Must be positive.
  double parameter = 1.0;

  static PhiSpec power(double p);
  static PhiSpec exponential(double rate);
  /// "pow:p" or "exp:A".
  static PhiSpec parse(const std::string& text);

  [[nodiscard]] double operator()(double t) const;
};

/// (1/n) sum_{m<n} Phi(|S_mm f - f|), 1 <= n <= 2^N.
Grid2 phi_strong_mean(const Grid2& f, std::uint64_t n_terms, const PhiSpec& phi);
/// One-variable analogue with the partial sums S_m.
Grid1 phi_strong_mean(const Grid1& f, std::uint64_t n_terms, const PhiSpec& phi);

/// (1/n) sum_{j<n} S_jj f, 1 <= n <= 2^N.
Grid2 marcinkiewicz_mean(const Grid2& f, std::uint64_t n_terms);

/// Table of n, sup_error, l1_error, slope for the centered p-mean, where slope
/// is the local log-log slope of sup_error against the previous row. The
/// summary carries least-squares slopes over all rows. Entries of n_list must
/// be positive and strictly increasing; they may exceed 2^N.
ExperimentReport convergence_report(const Grid2& f, double p, std::span<const std::uint64_t> n_list);

/// Least-squares slope of log(y) against log(x) over the points with y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y);

namespace detail {
/// |v|^p with 0 mapped to 0.
double abs_pow(double v, double p);
/// m^{1/p} for m >= 0.
double root(double mean, double p);
}  // namespace detail

}  // namespace walshlab
