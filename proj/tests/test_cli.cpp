#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "walshlab/function_spec.hpp"
#include "walshlab/report.hpp"

using namespace walshlab;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("parse_spec examples") {
  CHECK(parse_spec("const:1") == FunctionSpec{ConstantFunction{1.0}});
  CHECK(parse_spec("walsh:2,1") == FunctionSpec{WalshProduct{2, 1}});
  CHECK(parse_spec("rect:5,3,2,2") == FunctionSpec{DyadicRectangle{5, 3, 2, 2}});
  CHECK(parse_spec("step:4:12345") == FunctionSpec{RandomStep{4, 12345}});
  CHECK(parse_spec("singular:0.25") == FunctionSpec{PowerSingularity{0.25}});
}

TEST_CASE("parse_spec errors carry a position") {
  CHECK_THROWS_AS(parse_spec("cosine:1"), SpecParseError);
  CHECK_THROWS_AS(parse_spec("walsh:1"), SpecParseError);
  CHECK_THROWS_AS(parse_spec("singular:1.5"), SpecParseError);
  CHECK_THROWS_AS(parse_spec("step:15:1"), SpecParseError);
  CHECK_THROWS_AS(parse_spec("rect:4,2,0,1"), SpecParseError);
  try {
    parse_spec("walsh:2,x");
    FAIL("expected a parse error");
  } catch (const SpecParseError& e) {
    CHECK(e.position() == 8);
  }
}

TEST_CASE("format and parse round trip") {
  for (const char* text : {"const:1", "const:-0.125", "walsh:2,1", "rect:0,1,0,1", "step:4:12345",
                           "singular:0.4", "const:3.3333333333333335"}) {
    const auto spec = parse_spec(text);
    CHECK(format_spec(spec) == text);
    CHECK(parse_spec(format_spec(spec)) == spec);
  }
}

TEST_CASE("generate examples") {
  const Grid2 ones = generate(parse_spec("const:1"), 2);
  CHECK(ones.size() == 16);
  for (double v : ones.values()) CHECK(v == 1.0);

  const Grid2 w = generate(parse_spec("walsh:2,1"), 2);
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t y = 0; y < 4; ++y) {
      REQUIRE(w.at(x, y) == walsh_value(2, DyadicPoint(x, 2)) * walsh_value(1, DyadicPoint(y, 2)));
    }
  }
  CHECK(integral(w) == 0.0);

  const Grid2 s = generate(parse_spec("singular:0.25"), 4);
  for (std::size_t x = 0; x < 16; ++x) {
    for (std::size_t y = 0; y < 16; ++y) {
      const double expected = std::pow((x + 0.5) / 16.0, -0.25) * std::pow((y + 0.5) / 16.0, -0.25);
      REQUIRE(s.at(x, y) == doctest::Approx(expected));
      REQUIRE(s.at(x, y) > 0.0);
    }
  }
  CHECK(std::isfinite(llogl_functional(s)));

  const Grid2 r = generate(parse_spec("rect:1,1,2,2"), 2);
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t y = 0; y < 4; ++y) REQUIRE(r.at(x, y) == ((x >= 2 && y == 2) ? 1.0 : 0.0));
  }

  CHECK(generate(parse_spec("step:4:12345"), 6) == generate(parse_spec("step:4:12345"), 6));
  CHECK_FALSE(generate(parse_spec("step:4:1"), 6) == generate(parse_spec("step:4:2"), 6));
  const Grid2 step = generate(parse_spec("step:2:9"), 4);
  for (double v : step.values()) CHECK((v >= -1.0 && v < 1.0));
  CHECK_THROWS_AS(generate(parse_spec("step:4:1"), 3), std::out_of_range);
  CHECK_THROWS_AS(generate(parse_spec("rect:0,3,0,1"), 2), std::out_of_range);
  CHECK_THROWS_AS(generate(parse_spec("walsh:4,0"), 2), std::out_of_range);
}

TEST_CASE("report serialization") {
  ExperimentReport r;
  r.experiment = "demo";
  r.columns = {"a", "b", "c"};
  r.add_row({std::int64_t{1}, 0.1, std::string("x,y")});
  CHECK_THROWS(r.add_row({std::int64_t{1}}));
  std::ostringstream csv;
  write_report_csv(csv, r);
  CHECK(csv.str() == "a,b,c\n1,0.10000000000000001,\"x,y\"\n");
  const auto j = report_to_json(r);
  CHECK(j["rows"][0][1].get<double>() == 0.1);
  CHECK(j["experiment"] == "demo");
}

TEST_CASE("cli identities") {
  const auto r = invoke({"identities", "--n-max", "6"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == j["checked"]);
  CHECK(j["first_failure"].is_null());
}

TEST_CASE("cli strong-means") {
  const auto r = invoke({"strong-means", "--p", "2", "--function", "step:4:1", "--n", "16,64,256", "--resolution", "8",
                         "--output", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,sup_error,l1_error,slope");
  std::vector<double> errors;
  while (std::getline(lines, line)) {
    const auto first = line.find(',');
    errors.push_back(std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1)));
  }
  REQUIRE(errors.size() == 3);
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
}

TEST_CASE("cli usage errors") {
  const auto unknown = invoke({"identities", "--frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--frobnicate") != std::string::npos);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"maximal", "--function", "cosine:3"}).code == 2);
  CHECK(invoke({"maximal", "--op", "Q"}).code == 2);
  CHECK(invoke({"maximal", "--function", "step:4:1", "--resolution", "3"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("cli writes report files under --outdir") {
  const auto dir = std::filesystem::temp_directory_path() / "walshlab_cli_test";
  std::filesystem::remove_all(dir);
  const auto r = invoke({"maximal", "--op", "M1", "--function", "walsh:1,2", "--resolution", "3", "--output", "both",
                         "--outdir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(std::filesystem::exists(dir / "maximal.csv"));
  CHECK(std::filesystem::exists(dir / "maximal.json"));
  std::ifstream grid(dir / "maximal.grid.csv");
  const Grid2 m1 = read_table_csv<Grid2>(grid);
  for (double v : m1.values()) CHECK(v == 1.0);
  const auto j = nlohmann::json::parse(slurp(dir / "maximal.json"));
  CHECK(j["l1_norm"].get<double>() == 1.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli reads grids from CSV") {
  const auto path = std::filesystem::temp_directory_path() / "walshlab_cli_input.csv";
  {
    std::ofstream out(path);
    write_csv(out, Grid2::filled(2, 3.0));
  }
  const auto r = invoke({"maximal", "--op", "M", "--input", path.string()});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["l1_norm"].get<double>() == 3.0);
  std::filesystem::remove(path);
}

TEST_CASE("cli lab subcommands") {
  const auto decompose = invoke({"lab", "decompose", "--resolution", "3", "--n", "2", "--exact", "--x", "5"});
  REQUIRE(decompose.code == 0);
  const auto dj = nlohmann::json::parse(decompose.out);
  CHECK(dj["exact"]["identity_holds"] == true);
  CHECK(dj["rows"].size() == 9);

  const auto weak = invoke({"lab", "weak-type", "--resolution", "5", "--operator", "V"});
  REQUIRE(weak.code == 0);
  const auto wj = nlohmann::json::parse(weak.out);
  for (const char* key : {"operator", "resolution", "per_function", "corpus_max"}) CHECK(wj.contains(key));
  CHECK(wj["per_function"].size() == 8);
  CHECK(wj["per_function"][0].contains("argmax_lambda"));

  const auto mainest = invoke({"lab", "mainest", "--resolution", "4", "--function", "const:1"});
  REQUIRE(mainest.code == 0);
  CHECK(nlohmann::json::parse(mainest.out)["corpus_max"].get<double>() <= 1.0);
}

TEST_CASE("cli output is independent of the thread cap") {
  const std::vector<std::vector<std::string>> commands = {
      {"transform", "--function", "step:5:3", "--resolution", "7", "--output", "both"},
      {"vop", "--axis", "2", "--function", "singular:0.4", "--resolution", "7"},
      {"lab", "weak-type", "--resolution", "6", "--operator", "Hstar", "--output", "both"},
  };
  for (const auto& command : commands) {
    setenv("WALSHLAB_THREADS", "1", 1);
    const auto serial = invoke(command);
    setenv("WALSHLAB_THREADS", "8", 1);
    const auto parallel = invoke(command);
    REQUIRE(serial.code == 0);
    CHECK(serial.out == parallel.out);
  }
}
