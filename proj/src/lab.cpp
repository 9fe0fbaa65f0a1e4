#include "walshlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "walshlab/identities.hpp"
#include "walshlab/maximal.hpp"
#include "walshlab/parallel.hpp"
#include "walshlab/schipp_v.hpp"
#include "walshlab/strong_means.hpp"

namespace walshlab {

using Rational = boost::multiprecision::cpp_rational;

DualCoefficients::DualCoefficients(int n_, std::vector<double> alpha_) : n(n_), alpha(std::move(alpha_)) {
  if (n < 0 || n > 20) throw std::out_of_range("block exponent outside [0, 20]");
  if (alpha.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("need 2^n coefficients, got " + std::to_string(alpha.size()));
  }
  for (double a : alpha) {
    if (!std::isfinite(a)) throw std::invalid_argument("coefficients must be finite");
  }
}

DualCoefficients DualCoefficients::unit(int n, std::uint64_t m) {
  std::vector<double> alpha(std::size_t{1} << n, 0.0);
  if (m >= alpha.size()) throw std::out_of_range("unit index must be below 2^n");
  alpha[m] = 1.0;
  return DualCoefficients(n, std::move(alpha));
}

DualCoefficients DualCoefficients::random(int n, std::uint64_t seed) {
  std::vector<double> alpha(std::size_t{1} << n);
  UniformStream stream(seed);
  for (double& a : alpha) a = stream.next();
  DualCoefficients out(n, std::move(alpha));
  const double norm = out.l2_norm();
  if (norm > 0.0) {
    for (double& a : out.alpha) a /= norm;
  }
  return out;
}

double DualCoefficients::l2_norm() const {
  double sum = 0.0;
  for (double a : alpha) sum += a * a;
  return std::sqrt(sum);
}

double JBreakdown::gap() const { return std::abs(sum - bilinear) / (1.0 + std::abs(bilinear)); }

namespace {

template <class Scalar>
Scalar exact(double v);

template <>
double exact<double>(double v) {
  return v;
}

template <>
Rational exact<Rational>(double v) {
  if (v == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  const auto numerator = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r(numerator);
  const int shift = exponent - 53;
  boost::multiprecision::cpp_int power = 1;
  power <<= std::abs(shift);
  return shift >= 0 ? r * Rational(power) : r / Rational(power);
}

template <class Scalar>
Scalar half_of(std::int64_t doubled) {
  return Scalar(doubled) / Scalar(2);
}

enum Piece { kShell = 0, kWalsh = 1, kBoundary = 2 };

template <class Scalar>
struct ReplayCore {
  int resolution = 0;
  int n = 0;
  std::vector<Scalar> cell_average;  // level-n square cells, 4^n entries
  std::vector<Scalar> bilinear_kernel;
  std::array<std::vector<Scalar>, 9> j_kernels;

  ReplayCore(const Grid2& f, const DualCoefficients& alpha, bool with_j_terms)
      : resolution(f.resolution()), n(alpha.n) {
    if (n > resolution) throw std::out_of_range("alpha block exponent exceeds the resolution");
    if (resolution > 8) throw std::out_of_range("decomposition replay supports N <= 8");
    const std::size_t side = f.side();
    const std::size_t terms = alpha.alpha.size();
    const int shift = resolution - n;

    // S_{2^n,2^n} f is the level-n square cell average.
    const std::size_t cells = std::size_t{1} << n;
    cell_average.assign(cells * cells, Scalar(0));
    for (std::size_t x = 0; x < side; ++x) {
      for (std::size_t y = 0; y < side; ++y) {
        cell_average[((x >> shift) << n) | (y >> shift)] += exact<Scalar>(f[(x << resolution) | y]);
      }
    }
    const Scalar cell_scale = exact<Scalar>(std::ldexp(1.0, -2 * shift));
    for (auto& v : cell_average) v *= cell_scale;

    std::vector<Scalar> weights(terms);
    for (std::size_t m = 0; m < terms; ++m) weights[m] = exact<Scalar>(alpha.alpha[m]);

    // D_m(s) by direct accumulation of Walsh signs.
    std::vector<std::vector<std::int64_t>> dirichlet(terms, std::vector<std::int64_t>(side, 0));
    for (std::size_t s = 0; s < side; ++s) {
      const Code reversed = bit_reverse(static_cast<Code>(s), resolution);
      std::int64_t running = 0;
      for (std::size_t m = 0; m < terms; ++m) {
        dirichlet[m][s] = running;
        running += walsh_sign_reversed(m, reversed);
      }
    }
    bilinear_kernel = kernel_from([&](std::size_t m, std::size_t s) { return Scalar(dirichlet[m][s]); },
                                  [&](std::size_t m, std::size_t t) { return Scalar(dirichlet[m][t]); }, weights,
                                  side);
    if (!with_j_terms) return;

    std::array<std::vector<std::vector<Scalar>>, 3> pieces;
    for (auto& piece : pieces) piece.assign(terms, std::vector<Scalar>(side, Scalar(0)));
    for (std::size_t s = 0; s < side; ++s) {
      const DyadicPoint u(static_cast<Code>(s), resolution);
      const Code reversed = bit_reverse(static_cast<Code>(s), resolution);
      const bool in_core = u.in_interval(n);
      for (std::size_t m = 0; m < terms; ++m) {
        pieces[kShell][m][s] = half_of<Scalar>(schipp_shell(m, n, u).doubled());
        pieces[kWalsh][m][s] = half_of<Scalar>(-walsh_sign_reversed(m, reversed));
        if (in_core) pieces[kBoundary][m][s] = half_of<Scalar>(2 * static_cast<std::int64_t>(m) + 1);
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        j_kernels[3 * a + b] = kernel_from([&](std::size_t m, std::size_t s) { return pieces[a][m][s]; },
                                           [&](std::size_t m, std::size_t t) { return pieces[b][m][t]; },
                                           weights, side);
      }
    }
  }

  // K(s, t) = sum_m alpha_m a_m(s) b_m(t).
  template <class A, class B>
  static std::vector<Scalar> kernel_from(A&& a, B&& b, const std::vector<Scalar>& weights, std::size_t side) {
    std::vector<Scalar> kernel(side * side, Scalar(0));
    std::vector<Scalar> right(side);
    for (std::size_t m = 0; m < weights.size(); ++m) {
      if (weights[m] == Scalar(0)) continue;
      for (std::size_t t = 0; t < side; ++t) right[t] = b(m, t);
      for (std::size_t s = 0; s < side; ++s) {
        const Scalar left = weights[m] * a(m, s);
        if (left == Scalar(0)) continue;
        for (std::size_t t = 0; t < side; ++t) kernel[s * side + t] += left * right[t];
      }
    }
    return kernel;
  }

  Scalar evaluate(const std::vector<Scalar>& kernel, Code x, Code y) const {
    const std::size_t side = std::size_t{1} << resolution;
    const int shift = resolution - n;
    Scalar total(0);
    for (std::size_t s = 0; s < side; ++s) {
      const std::size_t row = ((x ^ s) >> shift) << n;
      for (std::size_t t = 0; t < side; ++t) {
        const Scalar& k = kernel[s * side + t];
        if (k == Scalar(0)) continue;
        total += cell_average[row | ((y ^ t) >> shift)] * k;
      }
    }
    return total * exact<Scalar>(std::ldexp(1.0, -2 * resolution));
  }
};

void check_point(DyadicPoint p, int resolution) {
  if (p.resolution() != resolution) throw std::invalid_argument("point resolution differs from the grid");
}

}  // namespace

struct DecompositionReplay::Impl {
  ReplayCore<double> core;
};

DecompositionReplay::DecompositionReplay(const Grid2& f, DualCoefficients alpha)
    : impl_(std::make_unique<Impl>(Impl{ReplayCore<double>(f, alpha, true)})) {}
DecompositionReplay::~DecompositionReplay() = default;
DecompositionReplay::DecompositionReplay(DecompositionReplay&&) noexcept = default;
DecompositionReplay& DecompositionReplay::operator=(DecompositionReplay&&) noexcept = default;

double DecompositionReplay::bilinear(DyadicPoint x, DyadicPoint y) const {
  check_point(x, impl_->core.resolution);
  check_point(y, impl_->core.resolution);
  return impl_->core.evaluate(impl_->core.bilinear_kernel, x.code(), y.code());
}

JBreakdown DecompositionReplay::breakdown(DyadicPoint x, DyadicPoint y) const {
  JBreakdown out;
  out.bilinear = bilinear(x, y);
  for (std::size_t k = 0; k < 9; ++k) {
    out.terms[k] = impl_->core.evaluate(impl_->core.j_kernels[k], x.code(), y.code());
  }
  out.sum = 0.0;
  for (double term : out.terms) out.sum += term;
  return out;
}

double bilinear_form(const Grid2& f, const DualCoefficients& alpha, DyadicPoint x, DyadicPoint y) {
  check_point(x, f.resolution());
  check_point(y, f.resolution());
  const ReplayCore<double> core(f, alpha, false);
  return core.evaluate(core.bilinear_kernel, x.code(), y.code());
}

JBreakdown j_terms(const Grid2& f, const DualCoefficients& alpha, DyadicPoint x, DyadicPoint y) {
  return DecompositionReplay(f, alpha).breakdown(x, y);
}

ExactDecomposition j_terms_exact(const Grid2& f, const DualCoefficients& alpha, DyadicPoint x, DyadicPoint y) {
  check_point(x, f.resolution());
  check_point(y, f.resolution());
  const ReplayCore<Rational> core(f, alpha, true);
  ExactDecomposition out;
  Rational sum(0);
  for (std::size_t k = 0; k < 9; ++k) {
    const Rational term = core.evaluate(core.j_kernels[k], x.code(), y.code());
    out.terms[k] = term.str();
    sum += term;
  }
  const Rational bilinear = core.evaluate(core.bilinear_kernel, x.code(), y.code());
  out.sum = sum.str();
  out.bilinear = bilinear.str();
  out.identity_holds = sum == bilinear;
  return out;
}

namespace {

DualityResult duality_at(const Grid2& f, int n, const std::vector<Grid2>& sums, DyadicPoint x, DyadicPoint y) {
  const std::size_t index = (static_cast<std::size_t>(x.code()) << f.resolution()) | y.code();
  std::vector<double> values(sums.size());
  double squares = 0.0;
  for (std::size_t m = 0; m < sums.size(); ++m) {
    values[m] = sums[m][index];
    squares += values[m] * values[m];
  }
  DualityResult result;
  result.diagonal_norm = std::sqrt(squares);
  if (result.diagonal_norm == 0.0) {
    result.passed = true;
    return result;
  }
  for (double& v : values) v /= result.diagonal_norm;
  result.bilinear_value = bilinear_form(f, DualCoefficients(n, std::move(values)), x, y);
  result.relative_error = std::abs(result.bilinear_value - result.diagonal_norm) / result.diagonal_norm;
  result.passed = result.relative_error <= kDualityTolerance;
  return result;
}

}  // namespace

DualityResult duality_check(const Grid2& f, int n, DyadicPoint x, DyadicPoint y) {
  check_point(x, f.resolution());
  check_point(y, f.resolution());
  if (n < 0 || n > f.resolution()) throw std::out_of_range("block exponent outside [0, N]");
  const auto sums = diagonal_sweep(f, std::uint64_t{1} << n);
  return duality_at(f, n, sums, x, y);
}

std::vector<DualityResult> duality_check_all(const Grid2& f, int n) {
  if (n < 0 || n > f.resolution()) throw std::out_of_range("block exponent outside [0, N]");
  const auto sums = diagonal_sweep(f, std::uint64_t{1} << n);
  std::vector<DualityResult> results;
  results.reserve(f.size());
  for (Code x = 0; x < f.side(); ++x) {
    for (Code y = 0; y < f.side(); ++y) {
      results.push_back(duality_at(f, n, sums, DyadicPoint(x, f.resolution()), DyadicPoint(y, f.resolution())));
    }
  }
  return results;
}

Grid2 mainest_majorant(const Grid2& f) {
  const Grid2 diagonal = diagonal_maximal(f);
  const std::vector<Grid2> parts = {
      v_hybrid_sup(hybrid_maximal(f, Axis::X), Axis::Y),
      v_hybrid_sup(hybrid_maximal(f, Axis::Y), Axis::X),
      dyadic_maximal_abs(f),
      v_hybrid_sup(diagonal, Axis::Y),
      v_hybrid_sup(diagonal, Axis::X),
  };
  const double l1 = norm_p(f, 1.0);
  std::vector<double> out(f.size(), l1);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
  }
  return Grid2(f.resolution(), std::move(out));
}

namespace {

double quantile(std::vector<double> sorted_values, double q) {
  if (sorted_values.empty()) return 0.0;
  const auto index = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted_values.size()))) ;
  return sorted_values[std::min(sorted_values.size() - 1, index == 0 ? 0 : index - 1)];
}

}  // namespace

ExperimentReport mainest_ratio(const Grid2& f) {
  const Grid2 majorant = mainest_majorant(f);
  const auto levels = strong_mean_levels(f, 2.0);
  const std::size_t side = f.side();

  ExperimentReport report;
  report.experiment = "mainest";
  report.columns = {"n", "max_ratio", "mean_ratio", "median_ratio"};
  report.provenance.resolution = f.resolution();

  std::vector<double> all;
  all.reserve(levels.size() * f.size());
  double best = -1.0;
  std::size_t best_n = 0, best_index = 0;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    std::vector<double> ratios(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double lhs = levels[n][i];
      ratios[i] = lhs == 0.0 ? 0.0 : lhs / majorant[i];
      if (ratios[i] > best) {
        best = ratios[i];
        best_n = n;
        best_index = i;
      }
    }
    const double mean = pairwise_sum(ratios) / static_cast<double>(ratios.size());
    all.insert(all.end(), ratios.begin(), ratios.end());
    std::sort(ratios.begin(), ratios.end());
    report.add_row({static_cast<std::int64_t>(n), ratios.back(), mean, quantile(ratios, 0.5)});
  }
  std::sort(all.begin(), all.end());
  report.summary["max_ratio"] = best;
  report.summary["argmax"] = {{"n", best_n}, {"x", best_index / side}, {"y", best_index % side}};
  report.summary["quantiles"] = {{"p50", quantile(all, 0.5)}, {"p90", quantile(all, 0.9)}, {"p99", quantile(all, 0.99)}};
  return report;
}

WeakOperator parse_weak_operator(const std::string& name) {
  if (name == "Hstar" || name == "H*" || name == "hstar") return WeakOperator::HStar;
  if (name == "V") return WeakOperator::V;
  if (name == "M") return WeakOperator::M;
  if (name == "M1") return WeakOperator::M1;
  if (name == "M2") return WeakOperator::M2;
  throw std::invalid_argument("unknown operator '" + name + "' (expected Hstar, V, M, M1, M2)");
}

std::string to_string(WeakOperator op) {
  switch (op) {
    case WeakOperator::HStar: return "Hstar";
    case WeakOperator::V: return "V";
    case WeakOperator::M: return "M";
    case WeakOperator::M1: return "M1";
    case WeakOperator::M2: return "M2";
  }
  return "?";
}

Grid2 apply_weak_operator(WeakOperator op, const Grid2& f, double p) {
  switch (op) {
    case WeakOperator::HStar: return maximal_strong(f, p);
    case WeakOperator::V: return v_hybrid_sup(f, Axis::X);
    case WeakOperator::M: return dyadic_maximal(f);
    case WeakOperator::M1: return hybrid_maximal(f, Axis::X);
    case WeakOperator::M2: return hybrid_maximal(f, Axis::Y);
  }
  throw std::invalid_argument("unknown operator");
}

double weak_denominator(WeakOperator op, const Grid2& f) {
  if (op == WeakOperator::V || op == WeakOperator::M) return norm_p(f, 1.0);
  return 1.0 + llogl_functional(f);
}

std::vector<double> default_lambda_grid(const Grid2& tf) {
  std::vector<double> values(tf.values().begin(), tf.values().end());
  std::sort(values.begin(), values.end());
  double base = values[(values.size() - 1) / 2];
  if (!(base > 0.0)) base = values.back();
  if (!(base > 0.0)) return {};
  constexpr int kPoints = 32;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double exponent = -2.0 + 4.0 * static_cast<double>(i) / (kPoints - 1);
    grid[i] = base * std::pow(10.0, exponent);
  }
  return grid;
}

ExperimentReport weak_type_constant(const WeakTypeOptions& options, const std::vector<CorpusEntry>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("weak-type measurement needs a non-empty corpus");
  for (std::size_t i = 1; i < options.lambda_grid.size(); ++i) {
    if (!(options.lambda_grid[i] > options.lambda_grid[i - 1])) {
      throw std::invalid_argument("lambda grid must be ascending");
    }
  }
  if (!options.lambda_grid.empty() && !(options.lambda_grid.front() > 0.0)) {
    throw std::invalid_argument("lambda grid must be positive");
  }

  ExperimentReport report;
  report.experiment = "weak-type";
  report.columns = {"spec", "lambda", "measure", "constant"};
  report.provenance.resolution = corpus.front().grid.resolution();

  auto per_function = nlohmann::ordered_json::array();
  double corpus_max = 0.0;
  for (const auto& entry : corpus) {
    const Grid2 tf = apply_weak_operator(options.op, entry.grid, options.p);
    const double denominator = weak_denominator(options.op, entry.grid);
    const auto grid = options.lambda_grid.empty() ? default_lambda_grid(tf) : options.lambda_grid;
    std::vector<double> sorted(tf.values().begin(), tf.values().end());
    std::sort(sorted.begin(), sorted.end());
    const double total = static_cast<double>(sorted.size());

    double sup = 0.0;
    double argmax = grid.empty() ? 0.0 : grid.front();
    for (double lambda : grid) {
      const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lambda);
      const double measure = static_cast<double>(above) / total;
      const double constant = denominator > 0.0 ? lambda * measure / denominator : 0.0;
      report.add_row({entry.label, lambda, measure, constant});
      if (constant > sup) {
        sup = constant;
        argmax = lambda;
      }
    }
    per_function.push_back({{"spec", entry.label}, {"sup_constant", sup}, {"argmax_lambda", argmax}});
    corpus_max = std::max(corpus_max, sup);
  }
  report.summary["operator"] = to_string(options.op);
  if (options.op == WeakOperator::HStar) report.summary["p"] = options.p;
  report.summary["resolution"] = report.provenance.resolution;
  report.summary["per_function"] = std::move(per_function);
  report.summary["corpus_max"] = corpus_max;
  return report;
}

}  // namespace walshlab
