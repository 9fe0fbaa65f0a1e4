#include "walshlab/grid.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "walshlab/parallel.hpp"

namespace walshlab {

Axis parse_axis(int axis) {
  if (axis == 1) return Axis::X;
  if (axis == 2) return Axis::Y;
  throw std::invalid_argument("axis must be 1 or 2, got " + std::to_string(axis));
}

namespace {

template <class Fn>
double weighted_sum(std::span<const double> values, Fn&& transform) {
  std::vector<double> mapped(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mapped[i] = transform(values[i]);
  return pairwise_sum(mapped) / static_cast<double>(values.size());
}

double power(double magnitude, double p) {
  if (magnitude == 0.0) return 0.0;
  if (p == 1.0) return magnitude;
  if (p == 2.0) return magnitude * magnitude;
  return std::exp(p * std::log(magnitude));
}

double norm_p_impl(std::span<const double> values, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("norm_p needs p > 0");
  const double mean = weighted_sum(values, [p](double v) { return power(std::abs(v), p); });
  if (p == 1.0) return mean;
  if (p == 2.0) return std::sqrt(mean);
  return mean == 0.0 ? 0.0 : std::exp(std::log(mean) / p);
}

double sup_impl(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double llogl_impl(std::span<const double> values) {
  return weighted_sum(values, [](double v) {
    const double a = std::abs(v);
    return a > 1.0 ? a * std::log(a) : 0.0;
  });
}

template <class Table>
Table abs_impl(const Table& f) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& v : out) v = std::abs(v);
  return Table(f.resolution(), std::move(out));
}

}  // namespace

double integral(const Grid1& f) { return weighted_sum(f.values(), [](double v) { return v; }); }
double integral(const Grid2& f) { return weighted_sum(f.values(), [](double v) { return v; }); }

double norm_p(const Grid1& f, double p) { return norm_p_impl(f.values(), p); }
double norm_p(const Grid2& f, double p) { return norm_p_impl(f.values(), p); }
double norm_sup(const Grid1& f) { return sup_impl(f.values()); }
double norm_sup(const Grid2& f) { return sup_impl(f.values()); }

double llogl_functional(const Grid1& f) { return llogl_impl(f.values()); }
double llogl_functional(const Grid2& f) { return llogl_impl(f.values()); }

Grid1 abs(const Grid1& f) { return abs_impl(f); }
Grid2 abs(const Grid2& f) { return abs_impl(f); }

Grid1 slice_x(const Grid2& f, std::size_t y) {
  const std::size_t side = f.side();
  if (y >= side) throw std::out_of_range("slice index out of range");
  std::vector<double> out(side);
  for (std::size_t x = 0; x < side; ++x) out[x] = f[x * side + y];
  return Grid1(f.resolution(), std::move(out));
}

Grid1 slice_y(const Grid2& f, std::size_t x) {
  const std::size_t side = f.side();
  if (x >= side) throw std::out_of_range("slice index out of range");
  auto row = f.values().subspan(x * side, side);
  return Grid1(f.resolution(), std::vector<double>(row.begin(), row.end()));
}

Grid2 tensor_product(const Grid1& u, const Grid1& v) {
  if (u.resolution() != v.resolution()) {
    throw std::invalid_argument("tensor product needs equal resolutions");
  }
  const std::size_t side = u.side();
  std::vector<double> out(side * side);
  for (std::size_t x = 0; x < side; ++x) {
    for (std::size_t y = 0; y < side; ++y) out[x * side + y] = u[x] * v[y];
  }
  return Grid2(u.resolution(), std::move(out));
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_csv(std::ostream& out, int resolution, std::span<const double> values) {
  out << "resolution," << resolution << '\n';
  for (double v : values) out << format_double(v) << '\n';
}

std::pair<int, std::vector<double>> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty grid CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  constexpr std::string_view kHeader = "resolution,";
  if (line.rfind(kHeader, 0) != 0) {
    throw std::invalid_argument("grid CSV must start with 'resolution,N'");
  }
  int resolution = -1;
  const char* first = line.data() + kHeader.size();
  const char* last = line.data() + line.size();
  auto [ptr, ec] = std::from_chars(first, last, resolution);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("bad resolution in grid CSV header: " + line);
  }
  check_resolution(resolution);
  std::vector<double> values;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != line.size()) {
      throw std::invalid_argument("bad value on grid CSV line " + std::to_string(line_number));
    }
    values.push_back(v);
  }
  return {resolution, std::move(values)};
}

}  // namespace walshlab
