#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "walshlab/function_spec.hpp"
#include "walshlab/grid.hpp"
#include "walshlab/identities.hpp"
#include "walshlab/lab.hpp"
#include "walshlab/maximal.hpp"
#include "walshlab/parallel.hpp"
#include "walshlab/report.hpp"
#include "walshlab/schipp_v.hpp"
#include "walshlab/strong_means.hpp"
#include "walshlab/transform.hpp"

namespace walshlab::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  int resolution = 6;
  std::uint64_t seed = 1;
  std::string output = "json";
  std::string outdir;
  std::string grid_path;
  std::string input;
  std::vector<std::string> functions;
};

struct GridDump {
  int resolution = 0;
  std::vector<double> values;
};

struct Outcome {
  ExperimentReport report;
  std::optional<GridDump> grid;
  bool passed = true;
};

struct LoadedFunction {
  std::string label;
  Grid2 grid;
};

std::string default_spec(const Globals& g) {
  return "step:" + std::to_string(std::min(g.resolution, 4)) + ":" + std::to_string(g.seed);
}

LoadedFunction load_function(const Globals& g) {
  if (!g.input.empty()) {
    if (!g.functions.empty()) throw UsageError("--function and --input are mutually exclusive");
    std::ifstream in(g.input);
    if (!in) throw UsageError("cannot open " + g.input);
    return {"file:" + g.input, read_table_csv<Grid2>(in)};
  }
  if (g.functions.size() > 1) throw UsageError("this command takes a single --function");
  const auto spec = parse_spec(g.functions.empty() ? default_spec(g) : g.functions.front());
  return {format_spec(spec), generate(spec, g.resolution)};
}

std::vector<CorpusEntry> load_corpus(const Globals& g) {
  if (!g.input.empty()) {
    auto f = load_function(g);
    return {CorpusEntry{f.label, std::move(f.grid)}};
  }
  return build_corpus(g.functions.empty() ? default_corpus_specs(g.seed) : g.functions, g.resolution);
}

void stamp(ExperimentReport& report, const Globals& g, int resolution) {
  report.provenance.seed = g.seed;
  report.provenance.resolution = resolution;
  report.provenance.timestamp = reproducible_timestamp();
}

template <class Table>
GridDump dump(const Table& t) {
  return {t.resolution(), std::vector<double>(t.values().begin(), t.values().end())};
}

Json failure_json(const std::string& identity, const IdentityFailure& f) {
  return {{"identity", identity},
          {"n", f.n},
          {"m", f.m},
          {"code", f.code},
          {"lhs", 0.5 * static_cast<double>(f.lhs_doubled)},
          {"rhs", 0.5 * static_cast<double>(f.rhs_doubled)}};
}

Outcome run_identities(const Globals& g, int n_max) {
  const IdentityReport schipp = verify_schipp_identity(n_max);
  const IdentityReport dirichlet = verify_dyadic_dirichlet(n_max);
  Outcome o;
  auto& r = o.report;
  r.experiment = "identities";
  r.config = {{"n_max", std::to_string(n_max)}};
  r.columns = {"identity", "checked", "passed"};
  r.add_row({std::string("schipp"), static_cast<std::int64_t>(schipp.checked),
             static_cast<std::int64_t>(schipp.passed)});
  r.add_row({std::string("dyadic_dirichlet"), static_cast<std::int64_t>(dirichlet.checked),
             static_cast<std::int64_t>(dirichlet.passed)});
  r.summary["checked"] = schipp.checked + dirichlet.checked;
  r.summary["passed"] = schipp.passed + dirichlet.passed;
  if (schipp.first_failure) {
    r.summary["first_failure"] = failure_json("schipp", *schipp.first_failure);
  } else if (dirichlet.first_failure) {
    r.summary["first_failure"] = failure_json("dyadic_dirichlet", *dirichlet.first_failure);
  } else {
    r.summary["first_failure"] = nullptr;
  }
  stamp(r, g, n_max);
  r.provenance.seed.reset();
  o.passed = schipp.ok() && dirichlet.ok();
  return o;
}

Outcome run_transform(const Globals& g) {
  const auto f = load_function(g);
  const Spectrum2 spectrum = fwht_forward_2d(f.grid);
  const Grid2 back = fwht_inverse_2d(spectrum);
  const int resolution = f.grid.resolution();
  const std::size_t side = f.grid.side();

  // Coefficient energy per square shell: shell 0 is (0, 0), shell b >= 1
  // collects max(i, j) in [2^{b-1}, 2^b).
  std::vector<std::vector<double>> shells(resolution + 1);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      const std::size_t top = std::max(i, j);
      const int shell = top == 0 ? 0 : highest_bit(top) + 1;
      const double c = spectrum[(i << resolution) | j];
      shells[shell].push_back(c * c);
    }
  }
  Outcome o;
  auto& r = o.report;
  r.experiment = "transform";
  r.config = {{"function", f.label}};
  r.columns = {"shell", "energy"};
  double energy = 0.0;
  for (int b = 0; b <= resolution; ++b) {
    const double e = pairwise_sum(shells[b]);
    energy += e;
    r.add_row({static_cast<std::int64_t>(b), e});
  }
  const double l2_squared = std::pow(norm_p(f.grid, 2.0), 2.0);
  double roundtrip = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) roundtrip = std::max(roundtrip, std::abs(back[i] - f.grid[i]));
  r.summary["l2_squared"] = l2_squared;
  r.summary["coefficient_energy"] = energy;
  r.summary["parseval_relative_error"] = std::abs(energy - l2_squared) / std::max(l2_squared, 1e-300);
  r.summary["roundtrip_max_error"] = roundtrip;
  stamp(r, g, resolution);
  o.grid = dump(spectrum);
  return o;
}

Outcome run_maximal(const Globals& g, const std::string& op) {
  const auto f = load_function(g);
  Grid2 tf;
  if (op == "M") {
    tf = dyadic_maximal(f.grid);
  } else if (op == "M1") {
    tf = hybrid_maximal(f.grid, Axis::X);
  } else if (op == "M2") {
    tf = hybrid_maximal(f.grid, Axis::Y);
  } else {
    tf = diagonal_maximal(f.grid);
  }
  Outcome o;
  auto& r = o.report;
  r.experiment = "maximal";
  r.config = {{"op", op}, {"function", f.label}};
  r.columns = {"operator", "l1_norm", "sup_norm", "llogl_ratio"};
  const double l1 = norm_p(tf, 1.0);
  const double ratio = l1 / (1.0 + llogl_functional(f.grid));
  r.add_row({op, l1, norm_sup(tf), ratio});
  r.summary["l1_norm"] = l1;
  stamp(r, g, f.grid.resolution());
  o.grid = dump(tf);
  return o;
}

Outcome run_vop(const Globals& g, int axis_number, std::optional<int> level) {
  const auto f = load_function(g);
  const Axis axis = parse_axis(axis_number);
  if (level && (*level < 0 || *level > f.grid.resolution())) throw UsageError("--n must lie in [0, N]");
  const Grid2 vf = level ? v_hybrid(f.grid, *level, axis) : v_hybrid_sup(f.grid, axis);
  const double f_l1 = norm_p(f.grid, 1.0);

  std::vector<double> sorted(vf.values().begin(), vf.values().end());
  std::sort(sorted.begin(), sorted.end());
  Outcome o;
  auto& r = o.report;
  r.experiment = "vop";
  r.config = {{"axis", std::to_string(axis_number)},
              {"n", level ? std::to_string(*level) : std::string("sup")},
              {"function", f.label}};
  r.columns = {"lambda", "measure", "scaled"};
  double best = 0.0;
  double best_lambda = 0.0;
  for (double lambda : default_lambda_grid(vf)) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), lambda);
    const double measure = static_cast<double>(above) / static_cast<double>(sorted.size());
    const double scaled = f_l1 > 0.0 ? lambda * measure / f_l1 : 0.0;
    r.add_row({lambda, measure, scaled});
    if (scaled > best) {
      best = scaled;
      best_lambda = lambda;
    }
  }
  r.summary["l1_norm"] = norm_p(vf, 1.0);
  r.summary["f_l1_norm"] = f_l1;
  r.summary["sup_scaled"] = best;
  r.summary["argmax_lambda"] = best_lambda;
  stamp(r, g, f.grid.resolution());
  o.grid = dump(vf);
  return o;
}

Outcome run_strong_means(const Globals& g, double p, const std::vector<std::uint64_t>& n_list) {
  const auto f = load_function(g);
  Outcome o;
  o.report = convergence_report(f.grid, p, n_list);
  std::string joined;
  for (auto n : n_list) joined += (joined.empty() ? "" : ",") + std::to_string(n);
  o.report.config = {{"p", format_double(p)}, {"n", joined}, {"function", f.label}};
  stamp(o.report, g, f.grid.resolution());
  return o;
}

Outcome run_decompose(const Globals& g, std::optional<int> n_opt, Code x, Code y, bool exact) {
  const auto f = load_function(g);
  const int resolution = f.grid.resolution();
  const int n = n_opt.value_or(std::min(resolution, 2));
  if (n < 0 || n > resolution) throw UsageError("--n must lie in [0, N]");
  if (exact && resolution > 4) throw UsageError("--exact supports N <= 4");
  const DyadicPoint px(x, resolution);
  const DyadicPoint py(y, resolution);
  const DualCoefficients alpha = DualCoefficients::random(n, g.seed);
  const JBreakdown split = DecompositionReplay(f.grid, alpha).breakdown(px, py);
  const DualityResult duality = duality_check(f.grid, n, px, py);

  Outcome o;
  auto& r = o.report;
  r.experiment = "decompose";
  r.config = {{"function", f.label}, {"n", std::to_string(n)}, {"x", std::to_string(x)}, {"y", std::to_string(y)}};
  r.columns = exact ? std::vector<std::string>{"k", "value", "exact"} : std::vector<std::string>{"k", "value"};
  std::optional<ExactDecomposition> rational;
  if (exact) rational = j_terms_exact(f.grid, alpha, px, py);
  for (std::size_t k = 0; k < 9; ++k) {
    std::vector<ReportCell> row{static_cast<std::int64_t>(k + 1), split.terms[k]};
    if (rational) row.emplace_back(rational->terms[k]);
    r.add_row(std::move(row));
  }
  constexpr double kTolerance = 1e-9;
  r.summary["sum"] = split.sum;
  r.summary["bilinear"] = split.bilinear;
  r.summary["gap"] = split.gap();
  r.summary["tolerance"] = kTolerance;
  r.summary["duality"] = {{"diagonal_norm", duality.diagonal_norm},
                          {"bilinear_value", duality.bilinear_value},
                          {"relative_error", duality.relative_error},
                          {"passed", duality.passed}};
  o.passed = split.gap() <= kTolerance && duality.passed;
  if (rational) {
    r.summary["exact"] = {{"sum", rational->sum},
                          {"bilinear", rational->bilinear},
                          {"identity_holds", rational->identity_holds}};
    o.passed = o.passed && rational->identity_holds;
  }
  stamp(r, g, resolution);
  return o;
}

Outcome run_mainest(const Globals& g) {
  const auto corpus = load_corpus(g);
  Outcome o;
  auto& r = o.report;
  r.experiment = "mainest";
  r.columns = {"spec", "n", "max_ratio", "mean_ratio", "median_ratio"};
  auto per_function = Json::array();
  double corpus_max = 0.0;
  for (const auto& entry : corpus) {
    const ExperimentReport single = mainest_ratio(entry.grid);
    for (const auto& row : single.rows) {
      std::vector<ReportCell> labelled{entry.label};
      labelled.insert(labelled.end(), row.begin(), row.end());
      r.add_row(std::move(labelled));
    }
    const double max_ratio = single.summary.at("max_ratio").get<double>();
    per_function.push_back({{"spec", entry.label},
                            {"max_ratio", max_ratio},
                            {"argmax", single.summary.at("argmax")},
                            {"quantiles", single.summary.at("quantiles")}});
    corpus_max = std::max(corpus_max, max_ratio);
  }
  r.summary["resolution"] = corpus.front().grid.resolution();
  r.summary["per_function"] = std::move(per_function);
  r.summary["corpus_max"] = corpus_max;
  stamp(r, g, corpus.front().grid.resolution());
  return o;
}

Outcome run_weak_type(const Globals& g, const std::string& op, double p, const std::vector<double>& lambdas) {
  WeakTypeOptions options;
  options.op = parse_weak_operator(op);
  options.p = p;
  options.lambda_grid = lambdas;
  const auto corpus = load_corpus(g);
  Outcome o;
  o.report = weak_type_constant(options, corpus);
  o.report.config = {{"operator", to_string(options.op)}, {"p", format_double(p)}};
  stamp(o.report, g, corpus.front().grid.resolution());
  return o;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  body(file);
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

void emit(const Outcome& o, const Globals& g, std::ostream& out) {
  const bool csv = g.output != "json";
  const bool json = g.output != "csv";
  std::string outdir = g.outdir;
  if (outdir.empty()) {
    if (const char* env = std::getenv("WALSHLAB_OUTDIR")) outdir = env;
  }
  auto write_grid = [&](const fs::path& path) {
    write_file(path, [&](std::ostream& s) { write_csv(s, o.grid->resolution, o.grid->values); });
  };
  if (!outdir.empty()) {
    const fs::path dir(outdir);
    fs::create_directories(dir);
    const std::string& id = o.report.experiment;
    std::vector<fs::path> written;
    if (csv) {
      written.push_back(dir / (id + ".csv"));
      write_file(written.back(), [&](std::ostream& s) { write_report_csv(s, o.report); });
    }
    if (json) {
      written.push_back(dir / (id + ".json"));
      write_file(written.back(), [&](std::ostream& s) { write_report_json(s, o.report); });
    }
    if (o.grid) {
      written.push_back(dir / (id + ".grid.csv"));
      write_grid(written.back());
    }
    for (const auto& path : written) out << path.string() << '\n';
  } else {
    if (json) write_report_json(out, o.report);
    if (csv) write_report_csv(out, o.report);
  }
  if (o.grid && !g.grid_path.empty()) write_grid(g.grid_path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-dimensional Walsh-Fourier analysis experiments", "walshlab"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--resolution,-N", g.resolution, "Resolution N (grids are 2^N x 2^N)")
      ->check(CLI::Range(0, 14))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for random steps and coefficients")->capture_default_str();
  app.add_option("--output", g.output, "Report format")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  app.add_option("--outdir", g.outdir, "Write <id>.csv/.json/.grid.csv here (default: $WALSHLAB_OUTDIR or stdout)");
  app.add_option("--grid", g.grid_path, "Also write the output grid CSV to this path");
  app.add_option("--function", g.functions, "Function spec (repeatable for corpus commands)")
      ->allow_extra_args(false);
  app.add_option("--input", g.input, "Grid CSV to use instead of --function");

  auto* identities = app.add_subcommand("identities", "Exact kernel identity checks");
  int n_max = 6;
  identities->add_option("--n-max", n_max, "Largest block exponent")->check(CLI::Range(0, 12))->capture_default_str();

  auto* transform = app.add_subcommand("transform", "2D Walsh-Fourier coefficients with Parseval check");

  auto* maximal = app.add_subcommand("maximal", "Dyadic maximal operators");
  std::string maximal_op = "M";
  maximal->add_option("--op", maximal_op, "Operator")
      ->check(CLI::IsMember({"M", "M1", "M2", "A"}))
      ->capture_default_str();

  auto* vop = app.add_subcommand("vop", "Hybrid Schipp operator V_1 / V_2");
  int vop_axis = 1;
  std::optional<int> vop_level;
  vop->add_option("--axis", vop_axis, "1 acts in x, 2 acts in y")->check(CLI::IsMember({1, 2}))->capture_default_str();
  vop->add_option("--n", vop_level, "Level n (default: sup over n)");

  auto* strong = app.add_subcommand("strong-means", "Convergence of the centered strong means");
  double strong_p = 2.0;
  std::vector<std::uint64_t> strong_n{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  strong->add_option("--p", strong_p, "Exponent p")->capture_default_str();
  strong->add_option("--n", strong_n, "Comma-separated increasing term counts")->delimiter(',');

  auto* lab = app.add_subcommand("lab", "Replays of the weak-type argument");
  lab->require_subcommand(1);
  lab->fallthrough();

  auto* decompose = lab->add_subcommand("decompose", "Nine-term decomposition and duality at one point");
  std::optional<int> decompose_n;
  Code point_x = 0;
  Code point_y = 0;
  bool exact = false;
  decompose->add_option("--n", decompose_n, "Block exponent n (default min(N, 2))");
  decompose->add_option("--x", point_x, "Point code x")->capture_default_str();
  decompose->add_option("--y", point_y, "Point code y")->capture_default_str();
  decompose->add_flag("--exact", exact, "Also evaluate in rational arithmetic (N <= 4)");

  auto* mainest = lab->add_subcommand("mainest", "Ratio of H_n^2 f to its pointwise majorant over a corpus");

  auto* weak = lab->add_subcommand("weak-type", "Empirical weak-type constants over a corpus");
  std::string weak_op = "Hstar";
  double weak_p = 2.0;
  std::vector<double> lambdas;
  weak->add_option("--operator", weak_op, "Hstar, V, M, M1 or M2")
      ->check(CLI::IsMember({"Hstar", "V", "M", "M1", "M2"}))
      ->capture_default_str();
  weak->add_option("--p", weak_p, "Exponent for Hstar")->capture_default_str();
  weak->add_option("--lambda", lambdas, "Comma-separated ascending lambda grid")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    Outcome outcome;
    if (identities->parsed()) {
      outcome = run_identities(g, n_max);
    } else if (transform->parsed()) {
      outcome = run_transform(g);
    } else if (maximal->parsed()) {
      outcome = run_maximal(g, maximal_op);
    } else if (vop->parsed()) {
      outcome = run_vop(g, vop_axis, vop_level);
    } else if (strong->parsed()) {
      outcome = run_strong_means(g, strong_p, strong_n);
    } else if (decompose->parsed()) {
      outcome = run_decompose(g, decompose_n, point_x, point_y, exact);
    } else if (mainest->parsed()) {
      outcome = run_mainest(g);
    } else {
      outcome = run_weak_type(g, weak_op, weak_p, lambdas);
    }
    emit(outcome, g, out);
    if (!outcome.passed) {
      err << "check failed: see report\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace walshlab::cli
