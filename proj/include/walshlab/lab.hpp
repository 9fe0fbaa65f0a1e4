#pragma once

// Numerical replay of the weak-type argument for the strong means:
//
//  * the duality step: the l2 norm of (S_mm f(x, y))_{m<2^n} is the supremum
//    over unit alpha of the bilinear form
//        B(alpha) = integral S_{2^n,2^n} f(x + s, y + t) sum_m alpha_m D_m(s) D_m(t);
//  * the nine-term split B = J_1 + ... + J_9 obtained by writing both kernels
//    in Schipp's form D_m = P_m - w_m / 2 + (m + 1/2) 1_{I_n};
//  * the pointwise majorant of H_n^2 f by V_2(M_1 f) + V_1(M_2 f) + M|f| +
//    V_2(A) + V_1(A) + ||f||_1;
//  * empirical weak-type constants sup_lambda lambda mu{Tf > lambda}.
//
// J_k numbering follows the order in which the kernel pieces pair up:
//
//   k | s-factor        | t-factor
//   --+-----------------+----------------
//   1 | P_m(s)          | P_m(t)
//   2 | P_m(s)          | -w_m(t)/2
//   3 | P_m(s)          | (m+1/2)1_{I_n}(t)
//   4 | -w_m(s)/2       | P_m(t)
//   5 | -w_m(s)/2       | -w_m(t)/2
//   6 | -w_m(s)/2       | (m+1/2)1_{I_n}(t)
//   7 | (m+1/2)1_{I_n}(s)| P_m(t)
//   8 | (m+1/2)1_{I_n}(s)| -w_m(t)/2
//   9 | (m+1/2)1_{I_n}(s)| (m+1/2)1_{I_n}(t)
//
// where P_m is the shell sum of schipp_shell().

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "walshlab/dyadic.hpp"
#include "walshlab/function_spec.hpp"
#include "walshlab/grid.hpp"
#include "walshlab/report.hpp"

namespace walshlab {

/// Coefficients alpha_m, m < 2^n, of a test combination of kernels.
struct DualCoefficients {
  int n = 0;
  std::vector<double> alpha{0.0};

  DualCoefficients() = default;
  DualCoefficients(int n, std::vector<double> alpha);

  static DualCoefficients unit(int n, std::uint64_t m);
  /// Seeded random direction with unit l2 norm.
  static DualCoefficients random(int n, std::uint64_t seed);

  [[nodiscard]] double l2_norm() const;
};

struct JBreakdown {
  std::array<double, 9> terms{};
  double sum = 0.0;
  double bilinear = 0.0;

  /// |sum - bilinear| / (1 + |bilinear|).
  [[nodiscard]] double gap() const;
};

/// Precomputed kernels for one (f, alpha); evaluation at a point costs O(4^N).
class DecompositionReplay {
 public:
  DecompositionReplay(const Grid2& f, DualCoefficients alpha);
  ~DecompositionReplay();
  DecompositionReplay(DecompositionReplay&&) noexcept;
  DecompositionReplay& operator=(DecompositionReplay&&) noexcept;

  [[nodiscard]] double bilinear(DyadicPoint x, DyadicPoint y) const;
  [[nodiscard]] JBreakdown breakdown(DyadicPoint x, DyadicPoint y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double bilinear_form(const Grid2& f, const DualCoefficients& alpha, DyadicPoint x, DyadicPoint y);
JBreakdown j_terms(const Grid2& f, const DualCoefficients& alpha, DyadicPoint x, DyadicPoint y);

/// The same decomposition in exact rational arithmetic (inputs are converted
/// from double exactly). Values are rendered as "p/q" strings.
struct ExactDecomposition {
  std::array<std::string, 9> terms;
  std::string sum;
  std::string bilinear;
  bool identity_holds = false;
};

ExactDecomposition j_terms_exact(const Grid2& f, const DualCoefficients& alpha, DyadicPoint x, DyadicPoint y);

struct DualityResult {
  double diagonal_norm = 0.0;   // (sum_{m<2^n} |S_mm f(x,y)|^2)^{1/2}
  double bilinear_value = 0.0;  // B(alpha*) at alpha*_m = S_mm f(x,y) / diagonal_norm
  double relative_error = 0.0;
  bool passed = false;
};

inline constexpr double kDualityTolerance = 1e-10;

DualityResult duality_check(const Grid2& f, int n, DyadicPoint x, DyadicPoint y);
/// Every point, row-major (x, y).
std::vector<DualityResult> duality_check_all(const Grid2& f, int n);

/// Right-hand side of the pointwise majorant of H_n^2 f (independent of n).
Grid2 mainest_majorant(const Grid2& f);

/// Per-level distribution of H_n^2 f / majorant over all points; 0/0 := 0.
/// Rows: n, max_ratio, mean_ratio, median_ratio. The summary holds the
/// overall max (with its n, x, y) and the 50/90/99% quantiles.
ExperimentReport mainest_ratio(const Grid2& f);

enum class WeakOperator { HStar, V, M, M1, M2 };

WeakOperator parse_weak_operator(const std::string& name);
std::string to_string(WeakOperator op);

/// T f for the operator; V is the x-direction hybrid V_1.
Grid2 apply_weak_operator(WeakOperator op, const Grid2& f, double p = 2.0);

/// 1 + integral |f| log+ |f| for H_*^p, M_1, M_2; ||f||_1 for V and M.
double weak_denominator(WeakOperator op, const Grid2& f);

/// 32 log-spaced points spanning [0.01, 100] x median(Tf) (max(Tf) when the
/// median vanishes).
std::vector<double> default_lambda_grid(const Grid2& tf);

struct WeakTypeOptions {
  WeakOperator op = WeakOperator::HStar;
  double p = 2.0;
  /// Empty: default_lambda_grid per function.
  std::vector<double> lambda_grid;
};

/// For each f and lambda: lambda mu{Tf > lambda} / denominator. Rows: spec,
/// lambda, measure, constant. Summary: operator, resolution, per_function
/// [{spec, sup_constant, argmax_lambda}], corpus_max.
ExperimentReport weak_type_constant(const WeakTypeOptions& options, const std::vector<CorpusEntry>& corpus);

}  // namespace walshlab
