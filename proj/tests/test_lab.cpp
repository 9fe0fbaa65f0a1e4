#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "walshlab/function_spec.hpp"
#include "walshlab/lab.hpp"
#include "walshlab/maximal.hpp"
#include "walshlab/strong_means.hpp"
#include "walshlab/transform.hpp"

using namespace walshlab;

namespace {

// Schipp's shell evaluated coordinate by coordinate.
double shell(std::uint64_t m, int n, std::uint64_t u, int resolution) {
  int k = 0;
  while (k < resolution && oracle::coordinate(u, k, resolution) == 0) ++k;
  if (k >= n) return 0.0;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const std::uint64_t flipped = u ^ (std::uint64_t{1} << (resolution - 1 - j));
    sum += (j == k ? 1.0 : -1.0) * std::ldexp(1.0, j - 1) * oracle::walsh(m, flipped, resolution);
  }
  return sum;
}

double piece(int kind, std::uint64_t m, int n, std::uint64_t u, int resolution) {
  switch (kind) {
    case 0: return shell(m, n, u, resolution);
    case 1: return -0.5 * oracle::walsh(m, u, resolution);
    default: return oracle::same_cell(u, 0, n, resolution) ? static_cast<double>(m) + 0.5 : 0.0;
  }
}

// J_1..J_9 and the bilinear form straight from their defining sums.
std::array<double, 10> naive_terms(const Grid2& f, const DualCoefficients& alpha, Code x, Code y) {
  const int resolution = f.resolution();
  const int n = alpha.n;
  const std::size_t side = f.side();
  const auto cells = oracle::partial_sum_rect(f, std::uint64_t{1} << n, std::uint64_t{1} << n);
  std::array<double, 10> out{};
  for (std::size_t s = 0; s < side; ++s) {
    for (std::size_t t = 0; t < side; ++t) {
      const double value = cells[((x ^ s) * side) + (y ^ t)];
      for (std::size_t m = 0; m < alpha.alpha.size(); ++m) {
        const double a = alpha.alpha[m];
        for (int k = 0; k < 9; ++k) {
          out[k] += value * a * piece(k / 3, m, n, s, resolution) * piece(k % 3, m, n, t, resolution);
        }
        out[9] += value * a * static_cast<double>(oracle::dirichlet(m, s, resolution)) *
                  static_cast<double>(oracle::dirichlet(m, t, resolution));
      }
    }
  }
  for (double& v : out) v /= static_cast<double>(side * side);
  return out;
}

}  // namespace

TEST_CASE("DualCoefficients") {
  CHECK_THROWS_AS(DualCoefficients(2, {1.0, 2.0}), std::invalid_argument);
  const auto r = DualCoefficients::random(3, 9);
  CHECK(r.l2_norm() == doctest::Approx(1.0));
  CHECK(DualCoefficients::random(3, 9).alpha == r.alpha);
  CHECK(DualCoefficients::unit(2, 3).alpha == std::vector<double>{0, 0, 0, 1});
  CHECK_THROWS(DualCoefficients::unit(2, 4));
}

TEST_CASE("bilinear form with a unit vector reproduces S_mm f") {
  const Grid2 f = oracle::random_grid2(3, 12);
  const auto sums = diagonal_sweep(f, 4);
  for (std::uint64_t m = 0; m < 4; ++m) {
    const auto alpha = DualCoefficients::unit(2, m);
    for (Code x = 0; x < 8; x += 3) {
      for (Code y = 0; y < 8; ++y) {
        const double b = bilinear_form(f, alpha, DyadicPoint(x, 3), DyadicPoint(y, 3));
        REQUIRE(b == doctest::Approx(sums[m].at(x, y)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bilinear form of a constant") {
  const Grid2 f = Grid2::filled(3, 2.5);
  const auto alpha = DualCoefficients::random(2, 4);
  const double tail = std::accumulate(alpha.alpha.begin() + 1, alpha.alpha.end(), 0.0);
  CHECK(bilinear_form(f, alpha, DyadicPoint(1, 3), DyadicPoint(6, 3)) == doctest::Approx(2.5 * tail));
  CHECK(bilinear_form(f, DualCoefficients(2, {0, 0, 0, 0}), DyadicPoint(1, 3), DyadicPoint(6, 3)) == 0.0);
  CHECK_THROWS(bilinear_form(f, DualCoefficients::unit(4, 0), DyadicPoint(0, 3), DyadicPoint(0, 3)));
}

TEST_CASE("J terms match their defining sums") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Grid2 f = oracle::random_grid2(3, seed);
    const auto alpha = DualCoefficients::random(static_cast<int>(seed % 3) + 1, seed);
    const DecompositionReplay replay(f, alpha);
    for (Code x : {0u, 5u}) {
      for (Code y : {0u, 3u, 6u}) {
        const auto expected = naive_terms(f, alpha, x, y);
        const auto got = replay.breakdown(DyadicPoint(x, 3), DyadicPoint(y, 3));
        for (int k = 0; k < 9; ++k) REQUIRE(got.terms[k] == doctest::Approx(expected[k]).epsilon(1e-12));
        REQUIRE(got.bilinear == doctest::Approx(expected[9]).epsilon(1e-12));
        REQUIRE(got.gap() <= 1e-9);
      }
    }
  }
}

TEST_CASE("J sum identity at N = 4") {
  const Grid2 f = oracle::random_grid2(4, 77);
  const auto alpha = DualCoefficients::random(2, 78);
  const DecompositionReplay replay(f, alpha);
  for (Code x = 0; x < 16; ++x) {
    for (Code y = 0; y < 16; ++y) REQUIRE(replay.breakdown(DyadicPoint(x, 4), DyadicPoint(y, 4)).gap() <= 1e-9);
  }
}

TEST_CASE("J_9 of a constant") {
  const double c = -1.75;
  const auto alpha = DualCoefficients::random(2, 5);
  double expected = 0.0;
  for (std::size_t m = 0; m < alpha.alpha.size(); ++m) expected += alpha.alpha[m] * std::pow(m + 0.5, 2.0);
  expected *= c / 16.0;
  const auto split = j_terms(Grid2::filled(3, c), alpha, DyadicPoint(2, 3), DyadicPoint(7, 3));
  CHECK(split.terms[8] == doctest::Approx(expected));
  const auto zero = j_terms(Grid2::filled(3, c), DualCoefficients(2, {0, 0, 0, 0}), DyadicPoint(2, 3),
                            DyadicPoint(7, 3));
  for (double t : zero.terms) CHECK(t == 0.0);
}

TEST_CASE("exact decomposition holds in rational arithmetic") {
  const Grid2 f = generate(parse_spec("step:3:4"), 3);
  const auto alpha = DualCoefficients::random(2, 4);
  for (Code x : {0u, 7u}) {
    const auto exact = j_terms_exact(f, alpha, DyadicPoint(x, 3), DyadicPoint(3, 3));
    CHECK(exact.identity_holds);
    CHECK(exact.sum == exact.bilinear);
  }
}

TEST_CASE("duality check") {
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    for (const auto& r : duality_check_all(oracle::random_grid2(3, seed), 2)) REQUIRE(r.passed);
  }
  const auto zero = duality_check(Grid2::filled(3, 0.0), 2, DyadicPoint(1, 3), DyadicPoint(2, 3));
  CHECK(zero.passed);
  CHECK(zero.diagonal_norm == 0.0);

  // S_mm of w_1 w_2 survives for m = 3 only among m < 4.
  const Grid2 w = tensor_product(walsh_function(1, 3), walsh_function(2, 3));
  for (Code x = 0; x < 8; ++x) {
    const auto r = duality_check(w, 2, DyadicPoint(x, 3), DyadicPoint(5, 3));
    CHECK(r.passed);
    CHECK(r.diagonal_norm == doctest::Approx(1.0));
  }
  const auto r3 = duality_check(w, 3, DyadicPoint(0, 3), DyadicPoint(0, 3));
  CHECK(r3.diagonal_norm == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("bilinear form never exceeds the diagonal norm") {
  const Grid2 f = oracle::random_grid2(3, 91);
  const auto sums = diagonal_sweep(f, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto alpha = DualCoefficients::random(2, seed);
    for (Code x = 0; x < 8; x += 2) {
      const DyadicPoint px(x, 3);
      const DyadicPoint py(7 - x, 3);
      double norm = 0.0;
      for (const auto& s : sums) norm += std::pow(s.at(x, 7 - x), 2.0);
      REQUIRE(bilinear_form(f, alpha, px, py) <= std::sqrt(norm) * (1 + 1e-10));
    }
  }
}

TEST_CASE("mainest ratios") {
  const auto zero = mainest_ratio(Grid2::filled(4, 0.0));
  for (double v : zero.column("max_ratio")) CHECK(v == 0.0);
  const auto one = mainest_ratio(Grid2::filled(4, 1.0));
  for (double v : one.column("max_ratio")) CHECK(v <= 1.0);
  CHECK(one.rows.size() == 5);
  const Grid2 majorant = mainest_majorant(Grid2::filled(3, 1.0));
  for (double v : majorant.values()) CHECK(v >= 1.0);
}

TEST_CASE("weak-type constants") {
  WeakTypeOptions options;
  const auto corpus = std::vector<CorpusEntry>{{"const:1", Grid2::filled(4, 1.0)}};
  options.lambda_grid = {0.5, 1.0, 2.0, 4.0};
  const auto report = weak_type_constant(options, corpus);
  const auto lambda = report.column("lambda");
  const auto measure = report.column("measure");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] >= 1.0) CHECK(measure[i] == 0.0);
  }
  CHECK(report.summary["per_function"][0]["sup_constant"].get<double>() == doctest::Approx(0.5));
  CHECK(report.summary["per_function"][0]["argmax_lambda"].get<double>() == 0.5);

  CHECK_THROWS(weak_type_constant(options, {}));
  options.lambda_grid = {2.0, 1.0};
  CHECK_THROWS(weak_type_constant(options, corpus));

  CHECK(default_lambda_grid(Grid2::filled(2, 2.0)).size() == 32);
  CHECK(default_lambda_grid(Grid2::filled(2, 2.0)).front() == doctest::Approx(0.02));
  CHECK(default_lambda_grid(Grid2::filled(2, 2.0)).back() == doctest::Approx(200.0));
  CHECK(parse_weak_operator("M1") == WeakOperator::M1);
  CHECK_THROWS(parse_weak_operator("Q"));
}
