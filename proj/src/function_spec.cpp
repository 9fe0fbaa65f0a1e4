#include "walshlab/function_spec.hpp"

#include <charconv>
#include <cmath>

namespace walshlab {

namespace {

struct Field {
  std::string_view text;
  std::size_t position;
};

std::vector<Field> split(std::string_view text, std::size_t offset, char separator) {
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    const auto next = text.find(separator, start);
    const auto end = next == std::string_view::npos ? text.size() : next;
    fields.push_back({text.substr(start, end - start), offset + start});
    if (next == std::string_view::npos) break;
    start = next + 1;
  }
  return fields;
}

template <class Int>
Int parse_integer(const Field& field, const char* name) {
  Int value{};
  const char* first = field.text.data();
  const char* last = first + field.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.text.empty() || ec != std::errc() || ptr != last) {
    throw SpecParseError(std::string("expected a non-negative integer for ") + name, field.position);
  }
  return value;
}

double parse_real(const Field& field, const char* name) {
  double value = 0.0;
  const char* first = field.text.data();
  const char* last = first + field.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw SpecParseError(std::string("expected a finite number for ") + name, field.position);
  }
  return value;
}

void expect_arity(const std::vector<Field>& fields, std::size_t arity, std::string_view family,
                  std::size_t end_position) {
  if (fields.size() != arity) {
    throw SpecParseError(std::string(family) + " takes " + std::to_string(arity) + " parameter(s), got " +
                             std::to_string(fields.size()),
                         end_position);
  }
}

std::string shortest(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

}  // namespace

FunctionSpec parse_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw SpecParseError("missing ':' after family name", text.size());
  const std::string_view family = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  const std::size_t offset = colon + 1;

  if (family == "const") {
    const auto fields = split(rest, offset, ',');
    expect_arity(fields, 1, family, text.size());
    return ConstantFunction{parse_real(fields[0], "c")};
  }
  if (family == "walsh") {
    const auto fields = split(rest, offset, ',');
    expect_arity(fields, 2, family, text.size());
    return WalshProduct{parse_integer<std::uint64_t>(fields[0], "i"), parse_integer<std::uint64_t>(fields[1], "j")};
  }
  if (family == "rect") {
    const auto fields = split(rest, offset, ',');
    expect_arity(fields, 4, family, text.size());
    DyadicRectangle r;
    r.x_prefix = parse_integer<std::uint32_t>(fields[0], "x prefix");
    r.x_length = parse_integer<int>(fields[1], "x prefix length");
    r.y_prefix = parse_integer<std::uint32_t>(fields[2], "y prefix");
    r.y_length = parse_integer<int>(fields[3], "y prefix length");
    if (r.x_length > kMaxResolution) throw SpecParseError("prefix length above 30", fields[1].position);
    if (r.y_length > kMaxResolution) throw SpecParseError("prefix length above 30", fields[3].position);
    if ((static_cast<std::uint64_t>(r.x_prefix) >> r.x_length) != 0) {
      throw SpecParseError("x prefix does not fit its length", fields[0].position);
    }
    if ((static_cast<std::uint64_t>(r.y_prefix) >> r.y_length) != 0) {
      throw SpecParseError("y prefix does not fit its length", fields[2].position);
    }
    return r;
  }
  if (family == "step") {
    const auto fields = split(rest, offset, ':');
    expect_arity(fields, 2, family, text.size());
    RandomStep s{parse_integer<int>(fields[0], "level"), parse_integer<std::uint64_t>(fields[1], "seed")};
    if (s.level > 14) throw SpecParseError("step level above 14", fields[0].position);
    return s;
  }
  if (family == "singular") {
    const auto fields = split(rest, offset, ',');
    expect_arity(fields, 1, family, text.size());
    const double beta = parse_real(fields[0], "beta");
    if (!(beta >= 0.0 && beta < 1.0)) throw SpecParseError("beta must lie in [0, 1)", fields[0].position);
    return PowerSingularity{beta};
  }
  throw SpecParseError("unknown function family '" + std::string(family) + "'", 0);
}

std::string format_spec(const FunctionSpec& spec) {
  struct Formatter {
    std::string operator()(const ConstantFunction& c) const { return "const:" + shortest(c.value); }
    std::string operator()(const WalshProduct& w) const {
      return "walsh:" + std::to_string(w.i) + "," + std::to_string(w.j);
    }
    std::string operator()(const DyadicRectangle& r) const {
      return "rect:" + std::to_string(r.x_prefix) + "," + std::to_string(r.x_length) + "," +
             std::to_string(r.y_prefix) + "," + std::to_string(r.y_length);
    }
    std::string operator()(const RandomStep& s) const {
      return "step:" + std::to_string(s.level) + ":" + std::to_string(s.seed);
    }
    std::string operator()(const PowerSingularity& s) const { return "singular:" + shortest(s.beta); }
  };
  return std::visit(Formatter{}, spec);
}

Grid2 generate(const FunctionSpec& spec, int resolution) {
  check_resolution(resolution);
  const std::size_t side = std::size_t{1} << resolution;
  std::vector<double> values(side * side);
  auto fill_grid = [&](auto&& value_at) {
    for (std::size_t x = 0; x < side; ++x) {
      for (std::size_t y = 0; y < side; ++y) values[(x << resolution) | y] = value_at(x, y);
    }
  };

  struct Generator {
    int resolution;
    std::size_t side;
    decltype(fill_grid)& fill;

    void operator()(const ConstantFunction& c) const {
      fill([&](std::size_t, std::size_t) { return c.value; });
    }
    void operator()(const WalshProduct& w) const {
      if ((w.i >> resolution) != 0 || (w.j >> resolution) != 0) {
        throw std::out_of_range("Walsh indices must be below 2^N");
      }
      fill([&](std::size_t x, std::size_t y) {
        const int sx = walsh_sign_reversed(w.i, bit_reverse(static_cast<Code>(x), resolution));
        const int sy = walsh_sign_reversed(w.j, bit_reverse(static_cast<Code>(y), resolution));
        return static_cast<double>(sx * sy);
      });
    }
    void operator()(const DyadicRectangle& r) const {
      if (r.x_length > resolution || r.y_length > resolution) {
        throw std::out_of_range("rectangle prefix longer than the resolution");
      }
      fill([&](std::size_t x, std::size_t y) {
        const bool in_x = (x >> (resolution - r.x_length)) == r.x_prefix;
        const bool in_y = (y >> (resolution - r.y_length)) == r.y_prefix;
        return in_x && in_y ? 1.0 : 0.0;
      });
    }
    void operator()(const RandomStep& s) const {
      if (s.level > resolution) throw std::out_of_range("step level exceeds the resolution");
      const std::size_t cells = std::size_t{1} << s.level;
      std::vector<double> cell_values(cells * cells);
      UniformStream stream(s.seed);
      for (double& v : cell_values) v = stream.next();
      const int shift = resolution - s.level;
      fill([&](std::size_t x, std::size_t y) { return cell_values[((x >> shift) << s.level) | (y >> shift)]; });
    }
    void operator()(const PowerSingularity& s) const {
      const double scale = std::ldexp(1.0, -resolution);
      fill([&](std::size_t x, std::size_t y) {
        const double u = (static_cast<double>(x) + 0.5) * scale;
        const double v = (static_cast<double>(y) + 0.5) * scale;
        return std::pow(u, -s.beta) * std::pow(v, -s.beta);
      });
    }
  };
  std::visit(Generator{resolution, side, fill_grid}, spec);
  return Grid2(resolution, std::move(values));
}

std::vector<std::string> default_corpus_specs(std::uint64_t seed) {
  return {
      "rect:0,1,0,1",
      "rect:5,3,2,2",
      "walsh:1,1",
      "walsh:3,5",
      "step:2:" + std::to_string(seed),
      "step:4:" + std::to_string(seed + 1),
      "singular:0.25",
      "singular:0.4",
  };
}

std::vector<CorpusEntry> build_corpus(const std::vector<std::string>& specs, int resolution) {
  std::vector<CorpusEntry> corpus;
  corpus.reserve(specs.size());
  for (const auto& text : specs) {
    const auto spec = parse_spec(text);
    corpus.push_back({format_spec(spec), generate(spec, resolution)});
  }
  return corpus;
}

}  // namespace walshlab
