#include "walshlab/strong_means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "walshlab/parallel.hpp"
#include "walshlab/transform.hpp"

namespace walshlab {

namespace detail {

double abs_pow(double v, double p) {
  const double a = std::abs(v);
  if (a == 0.0) return 0.0;
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  return std::exp(p * std::log(a));
}

double root(double mean, double p) {
  if (mean <= 0.0) return 0.0;
  if (p == 2.0) return std::sqrt(mean);
  if (p == 1.0) return mean;
  return std::exp(std::log(mean) / p);
}

}  // namespace detail

namespace {

void check_strong_p(double p) {
  if (!(p > 0.0 && p <= 2.0)) {
    throw std::invalid_argument("strong means support 0 < p <= 2, got p = " + std::to_string(p));
  }
}

void check_terms(std::uint64_t n_terms, int resolution) {
  if (n_terms == 0) throw std::invalid_argument("number of terms must be positive");
  if (n_terms > (std::uint64_t{1} << resolution)) {
    throw std::out_of_range("number of terms " + std::to_string(n_terms) + " exceeds 2^N");
  }
}

}  // namespace

DiagonalSweep::DiagonalSweep(const Grid2& f)
    : resolution_(f.resolution()),
      coeffs_(std::move(fwht_forward_2d(f)).take_values()),
      sum_(f.size(), 0.0),
      row_buffer_(f.side()),
      column_buffer_(f.side()),
      walsh_buffer_(f.side()) {}

void DiagonalSweep::advance() {
  const std::uint64_t m = m_++;
  const std::size_t side = std::size_t{1} << resolution_;
  if (m >= side) return;

  // S_{m+1,m+1} - S_mm = w_m(x) sum_{j<=m} c(m,j) w_j(y) + w_m(y) sum_{i<m} c(i,m) w_i(x).
  std::vector<double> row(side, 0.0);
  std::vector<double> column(side, 0.0);
  for (std::size_t j = 0; j <= m; ++j) row[j] = coeffs_[(m << resolution_) | j];
  for (std::size_t i = 0; i < m; ++i) column[i] = coeffs_[(i << resolution_) | m];
  row_buffer_ = std::move(fwht_inverse(Spectrum1(resolution_, std::move(row)))).take_values();
  column_buffer_ = std::move(fwht_inverse(Spectrum1(resolution_, std::move(column)))).take_values();
  walsh_buffer_ = std::move(walsh_function(m, resolution_)).take_values();

  parallel_for(side, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      const double wx = walsh_buffer_[x];
      const double cx = column_buffer_[x];
      double* out = sum_.data() + (x << resolution_);
      for (std::size_t y = 0; y < side; ++y) out[y] += wx * row_buffer_[y] + cx * walsh_buffer_[y];
    }
  });
}

std::vector<Grid2> diagonal_sweep(const Grid2& f, std::uint64_t m_max) {
  if (m_max > (std::uint64_t{1} << f.resolution())) {
    throw std::out_of_range("sweep cap " + std::to_string(m_max) + " exceeds 2^N");
  }
  std::vector<Grid2> sums;
  sums.reserve(m_max);
  DiagonalSweep sweep(f);
  for (std::uint64_t m = 0; m < m_max; ++m) {
    sums.push_back(sweep.current_grid());
    sweep.advance();
  }
  return sums;
}

namespace {

// Sweeps m = 0..2^{n_last}-1 accumulating |S_mm|^p and hands the block means
// H_n^p (n = 0..n_last) to `emit` as soon as each block closes.
template <class Emit>
void sweep_blocks(const Grid2& f, int n_last, double p, Emit&& emit) {
  DiagonalSweep sweep(f);
  const std::size_t cells = f.size();
  std::vector<double> acc(cells, 0.0);
  std::vector<double> mean(cells);
  const std::uint64_t total = std::uint64_t{1} << n_last;
  int next_level = 0;
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto s = sweep.current();
    parallel_for(cells, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) acc[i] += detail::abs_pow(s[i], p);
    });
    if (m + 1 == (std::uint64_t{1} << next_level)) {
      const double scale = std::ldexp(1.0, -next_level);
      for (std::size_t i = 0; i < cells; ++i) mean[i] = detail::root(acc[i] * scale, p);
      emit(next_level, std::span<const double>(mean));
      ++next_level;
    }
    if (m + 1 < total) sweep.advance();
  }
}

}  // namespace

Grid2 strong_mean(const Grid2& f, int n, double p) {
  check_strong_p(p);
  if (n < 0 || n > f.resolution()) throw std::out_of_range("block exponent outside [0, N]");
  std::vector<double> out;
  sweep_blocks(f, n, p, [&](int level, std::span<const double> mean) {
    if (level == n) out.assign(mean.begin(), mean.end());
  });
  return Grid2(f.resolution(), std::move(out));
}

std::vector<Grid2> strong_mean_levels(const Grid2& f, double p) {
  check_strong_p(p);
  std::vector<Grid2> levels;
  sweep_blocks(f, f.resolution(), p, [&](int, std::span<const double> mean) {
    levels.emplace_back(f.resolution(), std::vector<double>(mean.begin(), mean.end()));
  });
  return levels;
}

Grid2 maximal_strong(const Grid2& f, double p) {
  check_strong_p(p);
  std::vector<double> best(f.size(), 0.0);
  sweep_blocks(f, f.resolution(), p, [&](int, std::span<const double> mean) {
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], mean[i]);
  });
  return Grid2(f.resolution(), std::move(best));
}

namespace {

// Accumulates g(S_mm f - f) over m < n_terms; m >= 2^N contributes g(0).
template <class Term>
std::vector<double> centered_sum(const Grid2& f, std::uint64_t n_terms, Term&& term) {
  DiagonalSweep sweep(f);
  const auto values = f.values();
  const std::size_t cells = f.size();
  std::vector<double> acc(cells, 0.0);
  const std::uint64_t live = std::min<std::uint64_t>(n_terms, f.side());
  for (std::uint64_t m = 0; m < live; ++m) {
    const auto s = sweep.current();
    parallel_for(cells, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) acc[i] += term(s[i] - values[i]);
    });
    if (m + 1 < live) sweep.advance();
  }
  const double tail = static_cast<double>(n_terms - live) * term(0.0);
  if (tail != 0.0) {
    for (double& a : acc) a += tail;
  }
  return acc;
}

}  // namespace

Grid2 centered_strong_mean(const Grid2& f, std::uint64_t n_terms, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("p must be positive");
  if (n_terms == 0) throw std::invalid_argument("number of terms must be positive");
  auto acc = centered_sum(f, n_terms, [p](double d) { return detail::abs_pow(d, p); });
  const double n = static_cast<double>(n_terms);
  for (double& a : acc) a = detail::root(a / n, p);
  return Grid2(f.resolution(), std::move(acc));
}

PhiSpec PhiSpec::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("power Phi needs p > 0");
  return PhiSpec{Kind::Power, p};
}

PhiSpec PhiSpec::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential Phi needs A > 0");
  return PhiSpec{Kind::Exponential, rate};
}

PhiSpec PhiSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("Phi spec must look like pow:p or exp:A");
  const std::string kind = text.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad Phi parameter in '" + text + "'");
  }
  if (kind == "pow") return power(value);
  if (kind == "exp") return exponential(value);
  throw std::invalid_argument("unknown Phi family '" + kind + "'");
}

double PhiSpec::operator()(double t) const {
  if (kind == Kind::Power) return detail::abs_pow(t, parameter);
  return std::expm1(parameter * t);
}

namespace {

void check_phi(const PhiSpec& phi) {
  if (!(phi.parameter > 0.0) || !std::isfinite(phi.parameter)) {
    throw std::invalid_argument("invalid Phi parameter");
  }
}

}  // namespace

Grid2 phi_strong_mean(const Grid2& f, std::uint64_t n_terms, const PhiSpec& phi) {
  check_phi(phi);
  check_terms(n_terms, f.resolution());
  auto acc = centered_sum(f, n_terms, [&phi](double d) { return phi(std::abs(d)); });
  const double n = static_cast<double>(n_terms);
  for (double& a : acc) a /= n;
  return Grid2(f.resolution(), std::move(acc));
}

Grid1 phi_strong_mean(const Grid1& f, std::uint64_t n_terms, const PhiSpec& phi) {
  check_phi(phi);
  check_terms(n_terms, f.resolution());
  const auto coeffs = fwht_forward(f);
  std::vector<double> partial(f.size(), 0.0);
  std::vector<double> acc(f.size(), 0.0);
  for (std::uint64_t m = 0; m < n_terms; ++m) {
    for (std::size_t u = 0; u < f.size(); ++u) acc[u] += phi(std::abs(partial[u] - f[u]));
    const auto w = walsh_function(m, f.resolution());
    for (std::size_t u = 0; u < f.size(); ++u) partial[u] += coeffs[m] * w[u];
  }
  const double n = static_cast<double>(n_terms);
  for (double& a : acc) a /= n;
  return Grid1(f.resolution(), std::move(acc));
}

Grid2 marcinkiewicz_mean(const Grid2& f, std::uint64_t n_terms) {
  check_terms(n_terms, f.resolution());
  DiagonalSweep sweep(f);
  std::vector<double> acc(f.size(), 0.0);
  for (std::uint64_t m = 0; m < n_terms; ++m) {
    const auto s = sweep.current();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s[i];
    if (m + 1 < n_terms) sweep.advance();
  }
  const double n = static_cast<double>(n_terms);
  for (double& a : acc) a /= n;
  return Grid2(f.resolution(), std::move(acc));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("slope fit needs equal-length inputs");
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) points.emplace_back(std::log(x[i]), std::log(y[i]));
  }
  if (points.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (const auto& [a, b] : points) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [a, b] : points) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  return sxx == 0.0 ? std::numeric_limits<double>::quiet_NaN() : sxy / sxx;
}

ExperimentReport convergence_report(const Grid2& f, double p, std::span<const std::uint64_t> n_list) {
  check_strong_p(p);
  if (n_list.empty()) throw std::invalid_argument("convergence report needs at least one n");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] == 0 || (k > 0 && n_list[k] <= n_list[k - 1])) {
      throw std::invalid_argument("n list must be positive and strictly increasing");
    }
  }

  ExperimentReport report;
  report.experiment = "strong-means-convergence";
  report.columns = {"n", "sup_error", "l1_error", "slope"};
  report.provenance.resolution = f.resolution();

  DiagonalSweep sweep(f);
  const auto values = f.values();
  const std::size_t cells = f.size();
  const std::uint64_t side = f.side();
  std::vector<double> acc(cells, 0.0);
  std::vector<double> error(cells);
  std::vector<double> ns, sups, l1s;
  std::uint64_t m = 0;
  for (std::uint64_t n : n_list) {
    // Terms with m >= 2^N vanish because S_mm f = f there.
    for (; m < std::min(n, side); ++m) {
      const auto s = sweep.current();
      parallel_for(cells, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) acc[i] += detail::abs_pow(s[i] - values[i], p);
      });
      sweep.advance();
    }
    for (std::size_t i = 0; i < cells; ++i) error[i] = detail::root(acc[i] / static_cast<double>(n), p);
    const Grid2 error_grid(f.resolution(), error);
    const double sup = norm_sup(error_grid);
    const double l1 = norm_p(error_grid, 1.0);
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (!ns.empty() && sup > 0.0 && sups.back() > 0.0) {
      slope = std::log(sup / sups.back()) / std::log(static_cast<double>(n) / ns.back());
    }
    ns.push_back(static_cast<double>(n));
    sups.push_back(sup);
    l1s.push_back(l1);
    report.add_row({static_cast<std::int64_t>(n), sup, l1, slope});
  }
  report.summary["p"] = p;
  const double fit_sup = loglog_slope(ns, sups);
  const double fit_l1 = loglog_slope(ns, l1s);
  report.summary["fitted_slope_sup"] = std::isfinite(fit_sup) ? nlohmann::ordered_json(fit_sup) : nullptr;
  report.summary["fitted_slope_l1"] = std::isfinite(fit_l1) ? nlohmann::ordered_json(fit_l1) : nullptr;
  return report;
}

}  // namespace walshlab
