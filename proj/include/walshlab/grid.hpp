#pragma once

// Functions on G (Grid1) and G x G (Grid2) at finite resolution N, stored as
// level-N cell averages, and their Walsh-Fourier coefficient tables.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "walshlab/dyadic.hpp"

namespace walshlab {

enum class Axis { X = 1, Y = 2 };

Axis parse_axis(int axis);

struct SpaceTag {};
struct FrequencyTag {};

/// Immutable table of 2^(Dim*N) finite reals indexed by code (Dim = 1) or by
/// row-major (x-code, y-code) (Dim = 2).
template <int Dim, class Tag>
class DyadicTable {
  static_assert(Dim == 1 || Dim == 2);

 public:
  static constexpr int kDim = Dim;

  DyadicTable() = default;

  DyadicTable(int resolution, std::vector<double> values)
      : resolution_(resolution), values_(std::move(values)) {
    check_resolution(resolution);
    if (Dim * resolution > 28) {
      throw std::out_of_range("table too large for resolution " + std::to_string(resolution));
    }
    if (values_.size() != expected_size(resolution)) {
      throw std::invalid_argument("table length " + std::to_string(values_.size()) +
                                  " does not match resolution " +
                                  std::to_string(resolution));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("table values must be finite");
    }
  }

  static DyadicTable filled(int resolution, double value) {
    check_resolution(resolution);
    return DyadicTable(resolution, std::vector<double>(expected_size(resolution), value));
  }

  static std::size_t expected_size(int resolution) {
    return std::size_t{1} << (Dim * resolution);
  }

  [[nodiscard]] int resolution() const noexcept { return resolution_; }
  /// 2^N, the number of cells per axis.
  [[nodiscard]] std::size_t side() const noexcept { return std::size_t{1} << resolution_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] double at(std::size_t i) const
    requires(Dim == 1)
  {
    return values_.at(i);
  }

  [[nodiscard]] double at(std::size_t x, std::size_t y) const
    requires(Dim == 2)
  {
    if (x >= side() || y >= side()) throw std::out_of_range("grid index out of range");
    return values_[(x << resolution_) | y];
  }

  /// Releases the storage; the table is left empty.
  [[nodiscard]] std::vector<double> take_values() && { return std::move(values_); }

  friend bool operator==(const DyadicTable&, const DyadicTable&) = default;

 private:
  int resolution_ = 0;
  std::vector<double> values_ = std::vector<double>(1, 0.0);
};

using Grid1 = DyadicTable<1, SpaceTag>;
using Grid2 = DyadicTable<2, SpaceTag>;
using Spectrum1 = DyadicTable<1, FrequencyTag>;
using Spectrum2 = DyadicTable<2, FrequencyTag>;

// Haar-weighted functionals. The grids are step functions, so these are exact
// finite sums with weight 2^{-Dim*N} per cell.

double integral(const Grid1& f);
double integral(const Grid2& f);

/// (integral |f|^p)^{1/p}, p > 0.
double norm_p(const Grid1& f, double p);
double norm_p(const Grid2& f, double p);
double norm_sup(const Grid1& f);
double norm_sup(const Grid2& f);

/// integral |f| log+ |f|.
double llogl_functional(const Grid1& f);
double llogl_functional(const Grid2& f);

/// Pointwise |f|.
Grid1 abs(const Grid1& f);
Grid2 abs(const Grid2& f);

/// Column f(., y) of a Grid2 as a Grid1 in x.
Grid1 slice_x(const Grid2& f, std::size_t y);
/// Row f(x, .) of a Grid2 as a Grid1 in y.
Grid1 slice_y(const Grid2& f, std::size_t x);

/// f(x, y) = u(x) * v(y).
Grid2 tensor_product(const Grid1& u, const Grid1& v);

// CSV dump/load: a `resolution,N` header followed by one value per line in
// code order, 17 significant digits.

void write_csv(std::ostream& out, int resolution, std::span<const double> values);
/// Returns the resolution and the values; the caller decides the table type.
std::pair<int, std::vector<double>> read_csv(std::istream& in);

template <int Dim, class Tag>
void write_csv(std::ostream& out, const DyadicTable<Dim, Tag>& table) {
  write_csv(out, table.resolution(), table.values());
}

template <class Table>
Table read_table_csv(std::istream& in) {
  auto [resolution, values] = read_csv(in);
  return Table(resolution, std::move(values));
}

/// Formats a double with 17 significant digits.
std::string format_double(double value);

}  // namespace walshlab
