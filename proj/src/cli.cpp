#include "discrepancy/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "discrepancy/bench.hpp"
#include "discrepancy/coloring.hpp"
#include "discrepancy/errors.hpp"
#include "discrepancy/matcore.hpp"
#include "discrepancy/purify.hpp"
#include "discrepancy/rac.hpp"
#include "discrepancy/rng.hpp"
#include "discrepancy/sketch.hpp"

namespace discrepancy::cli {

namespace {

using nlohmann::json;

// Raised when a result fails its own re-validation.
class AlgorithmFailure : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out_path;
};

struct Source {
  std::string gen_kind;
  std::string input;
  std::size_t n = 16;
  std::size_t d = 16;
  std::size_t rank = 0;
  std::size_t support = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
  sub->add_option("--out", c.out_path, "Output file (default: stdout)");
}

void add_source(CLI::App* sub, Source& s, bool gen_required_flag_name_kind = false) {
  if (gen_required_flag_name_kind) {
    sub->add_option("--kind", s.gen_kind, "Family kind")->required();
  } else {
    auto* g = sub->add_option("--gen", s.gen_kind, "Generate a family of this kind");
    auto* i = sub->add_option("--input", s.input, "Read the family from a JSON file");
    g->excludes(i);
  }
  sub->add_option("--n", s.n, "Number of matrices");
  sub->add_option("--d", s.d, "Matrix dimension");
  sub->add_option("--rank", s.rank, "moderate_rank: number of ±1 eigenvalues");
  sub->add_option("--support", s.support, "sparse_diagonal: diagonal support");
}

MatrixFamily load_family(const Source& s, std::uint64_t seed) {
  if (!s.input.empty()) return read_family(s.input);
  if (s.gen_kind.empty()) throw ConfigError("one of --gen or --input is required");
  GenSpec spec;
  spec.kind = parse_family_kind(s.gen_kind);
  spec.n = s.n;
  spec.d = s.d;
  spec.rank = s.rank;
  spec.support = s.support;
  return gen_family(spec, seed);
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + c.out_path + "' for writing");
  f << text;
  if (!f) throw ConfigError("failed writing '" + c.out_path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ConfigError("unsupported config value " + v.dump());
}

// Nested objects are flattened; true booleans become bare flags.
void config_to_args(const json& obj, std::vector<std::string>& args) {
  for (const auto& [key, v] : obj.items()) {
    if (key == "subcommand") continue;
    if (v.is_object()) {
      config_to_args(v, args);
    } else if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(json_scalar(v));
    }
  }
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a path");
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k + 2));
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (!path) return args;
  const std::string text = read_text(*path);
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 1, e.byte);
  }
  if (!cfg.is_object()) throw ParseError("config must be a JSON object", 1, 0);
  std::vector<std::string> extra;
  config_to_args(cfg, extra);
  const bool has_sub = !args.empty() && args.front().rfind("-", 0) != 0;
  if (!has_sub) {
    if (!cfg.contains("subcommand") || !cfg["subcommand"].is_string())
      throw ConfigError("no subcommand given on the command line or in the config");
    args.insert(args.begin(), cfg["subcommand"].get<std::string>());
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

std::size_t default_jobs() {
  const char* env = std::getenv("DISCREPANCY_JOBS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError(std::string("DISCREPANCY_JOBS is not a number: ") + env);
  return static_cast<std::size_t>(v);
}

void add_solver(CLI::App* sub, SolveParams& p) {
  sub->add_option("--C", p.C_delta, "Multiplier of the Δ formula");
  sub->add_option("--eps", p.eps_frac, "Required integral fraction");
  sub->add_option("--int-tol", p.int_tol, "Integrality tolerance");
  sub->add_option("--feas-tol", p.feas_tol, "Relative feasibility tolerance");
  sub->add_option("--beta", p.beta, "Smoothing temperature (0 = automatic)");
  sub->add_option("--max-iters", p.max_iters, "Iteration budget per solve");
  sub->add_option("--max-retries", p.max_retries, "Retry budget (0 = 10n)");
  sub->add_option("--stall-tol", p.stall_tol, "Stationarity threshold");
  sub->add_option("--delta", p.delta, "Explicit Δ (0 = formula)");
}

// --- subcommands ---------------------------------------------------------

std::string run_partial(const Source& src, const Common& c, SolveParams p) {
  const MatrixFamily family = load_family(src, derive_seed(c.seed, 0));
  p.seed = derive_seed(c.seed, 1);
  p.jobs = c.jobs;
  PartialResult res = partial_coloring(family, p);
  res.coloring.rounds = {{family.size(), res.coloring.delta_used, res.retries}};
  try {
    validate_coloring(family, res.coloring, p.int_tol, 10.0 * p.feas_tol);
  } catch (const Error& e) {
    throw AlgorithmFailure(std::string("partial coloring failed re-validation: ") + e.what());
  }
  return coloring_to_json(res.coloring);
}

std::string run_color(const Source& src, const Common& c, SolveParams p) {
  const MatrixFamily family = load_family(src, derive_seed(c.seed, 0));
  p.seed = derive_seed(c.seed, 1);
  p.jobs = c.jobs;
  const FullColoring res = full_coloring(family, p);
  try {
    validate_signing(family, res.coloring);
  } catch (const Error& e) {
    throw AlgorithmFailure(std::string("coloring failed re-validation: ") + e.what());
  }
  return coloring_to_json(res.coloring);
}

struct SketchArgs {
  std::string check = "all";
  std::size_t r = 8;
  std::size_t trials = 2000;
  bool recentre = false;
};

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string run_sketch_verify(const Source& src, const Common& c, const SketchArgs& a, bool& all_pass) {
  const MatrixFamily raw = load_family(src, derive_seed(c.seed, 0));
  // generated families are recentred; file input needs --recentre
  const MatrixFamily family = require_traceless(raw, a.recentre || src.input.empty());
  const std::vector<std::string> known = {"expectation", "variance", "spectral", "hanson-wright", "decoupling"};
  if (a.check != "all" && std::find(known.begin(), known.end(), a.check) == known.end())
    throw ConfigError("unknown check '" + a.check + "'");
  auto wanted = [&](const std::string& name) { return a.check == "all" || a.check == name; };

  Rng rng(derive_seed(c.seed, 1));
  auto y = rng.normal_vector(family.dim());
  const double ny = norm2(y);
  for (double& v : y) v /= ny;

  const std::string r = std::to_string(a.r), d = std::to_string(family.dim());
  std::string out = "check,param_r,param_d,estimate,stderr,bound,pass\n";
  auto row = [&](const std::string& name, double est, double se, double bound, bool pass) {
    all_pass = all_pass && pass;
    out += name + ',' + r + ',' + d + ',' + format_double(est) + ',' + format_double(se) + ',' + format_double(bound) +
           ',' + csv_bool(pass) + '\n';
  };
  constexpr double C = 50.0;
  if (wanted("expectation")) {
    const auto s = mc_quadratic_form(y, family[0], a.r, a.trials, derive_seed(c.seed, 2), c.jobs);
    const double f = expected_quadratic_form(y, family[0], a.r);
    row("expectation", s.mean, s.mean_se, f, std::abs(s.mean - f) <= 4.0 * s.mean_se + 1e-12);
  }
  if (wanted("variance")) {
    const auto s = empirical_variance(family, y, a.r, a.trials, derive_seed(c.seed, 3), false, c.jobs);
    const double b = variance_upper_bound(family, a.r, C);
    row("variance", s.mean, s.mean_se, b, s.mean <= b);
  }
  if (wanted("spectral")) {
    const auto s = sketched_family_spectral_norm(family, a.r, a.trials, derive_seed(c.seed, 4), false, c.jobs);
    const double b = C * (family.sum_sq_norm() + family.sum_sq_trace() / static_cast<double>(a.r));
    row("spectral", s.mean, s.mean_se, b, s.mean <= b);
  }
  if (wanted("hanson-wright")) {
    const auto s = fixed_matrix_sketch_norm(family[0], a.r, a.trials, derive_seed(c.seed, 5), c.jobs);
    const double b = C * (spectral_norm(family[0]) + nuclear_norm(family[0]) / static_cast<double>(a.r));
    row("hanson-wright", s.mean, s.mean_se, b, s.mean <= b);
  }
  if (wanted("decoupling")) {
    const auto rep = decoupled_norm_compare(family, a.r, a.trials, derive_seed(c.seed, 6), false, c.jobs);
    row("decoupling", rep.lhs.mean, rep.combined_se, rep.rhs, rep.holds);
  }
  return out;
}

struct RacArgs {
  std::string protocol = "hadamard";
  std::size_t n = 4;
  std::size_t t = 16;
  std::size_t r = 1;
  std::size_t trials = 1000;
  std::string file;
};

QuantumPureRAC load_quantum_code(const std::string& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("code file: ") + e.what(), 1, e.byte);
  }
  QuantumPureRAC code;
  code.n = j.at("n").get<std::size_t>();
  for (const auto& s : j.at("states")) code.states.push_back(s.get<std::vector<double>>());
  if (code.states.empty()) throw ConfigError("code file has no states");
  const std::size_t dim = code.states.front().size();
  for (const auto& m : j.at("measurements")) code.measurements.emplace_back(dim, m.get<std::vector<double>>());
  if (code.states.size() != (std::size_t{1} << std::min<std::size_t>(code.n, 63)))
    throw ShapeError("code file must list 2^n states");
  code.validate();
  return code;
}

std::string run_rac_demo(const Common& c, const RacArgs& a) {
  if (a.r == 0 || a.r % 2 == 0) throw ConfigError("--r must be odd");
  std::string out = "g,i,p_success\n";
  double summary = 1.0;
  std::string label = "min";
  auto line = [&](std::uint64_t g, std::size_t i, double p) {
    out += std::to_string(g) + ',' + std::to_string(i) + ',' + format_double(p) + '\n';
    summary = std::min(summary, p);
  };
  if (a.protocol == "hadamard") {
    const auto h = hadamard_fourier_protocol(a.n);
    if (a.r == 1) {
      for (std::uint64_t g = 0; g < h.fourier_mass.size(); ++g)
        for (std::size_t i = 0; i < a.n; ++i) line(g, i, h.success[g * a.n + i]);
    } else {
      for (const auto& p : amplify_classical(h.classical(), a.r, a.trials, c.seed, c.jobs))
        line(p.g, p.i, 1.0 - p.failure);
    }
  } else if (a.protocol == "codebook") {
    const Codebook cb = make_codebook(a.n, a.t, derive_seed(c.seed, 0));
    double total = 0.0;
    for (std::size_t s = 0; s < a.trials; ++s) {
      Rng rng(derive_seed(c.seed, 1, s));
      const auto x = rng.rademacher_vector(a.n);
      std::size_t best = 0;
      double best_val = -1e300;
      for (std::size_t j = 0; j < cb.words.size(); ++j) {
        const double v = dot(x, cb.words[j]);
        if (v > best_val) best_val = v, best = j;
      }
      for (std::size_t i = 0; i < a.n; ++i) {
        const double p = cb.words[best][i] == x[i] ? 1.0 : 0.0;
        out += std::to_string(s) + ',' + std::to_string(i) + ',' + format_double(p) + '\n';
        total += p;
      }
    }
    summary = total / static_cast<double>(a.trials * a.n);
    label = "mean";
  } else if (a.protocol == "custom-file") {
    if (a.file.empty()) throw ConfigError("custom-file protocol needs --file");
    const QuantumPureRAC code = load_quantum_code(a.file);
    if (a.r == 1) {
      const RacEval ev = evaluate_rac(code);
      for (std::size_t k = 0; k < ev.messages.size(); ++k)
        for (std::size_t i = 0; i < code.n; ++i) line(ev.messages[k], i, ev.p[k * code.n + i]);
    } else {
      for (std::uint64_t g = 0; g < code.states.size(); ++g)
        for (std::size_t i = 0; i < code.n; ++i) {
          const auto md = amplify_matrix_decode(code.states[g], code.measurements[i], message_bit(g, i), a.r, a.trials,
                                                derive_seed(c.seed, g * code.n + i));
          line(g, i, 1.0 - md.failure);
        }
    }
  } else {
    throw ConfigError("unknown protocol '" + a.protocol + "'");
  }
  out += "summary," + label + ',' + format_double(summary) + '\n';
  return out;
}

struct RankArgs {
  std::string input;
  std::size_t d = 10;
  std::size_t m = 4;
  bool sqrt_bound = false;
};

Spectahedron load_spectahedron(const std::string& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("spectahedron file: ") + e.what(), 1, e.byte);
  }
  Spectahedron sp;
  const std::size_t d = j.at("d").get<std::size_t>();
  for (const auto& c : j.at("constraints"))
    sp.constraints.push_back({SymMatrix(d, c.at("A").get<std::vector<double>>()), c.at("b").get<double>()});
  sp.Y0 = SymMatrix(d, j.at("Y0").get<std::vector<double>>());
  return sp;
}

std::string run_rank_reduce(const Common& c, const RankArgs& a) {
  const Spectahedron sp = a.input.empty() ? random_spectahedron(a.d, a.m, c.seed) : load_spectahedron(a.input);
  RankReduceOptions opts;
  opts.stop_at_sqrt_bound = a.sqrt_bound;
  const RankReduceResult res = rank_reduce(sp.constraints, sp.Y0, opts);
  std::string out = "{\"initial_rank\":" + std::to_string(res.initial_rank) + ",\"rank\":" + std::to_string(res.rank) +
                    ",\"steps\":" + std::to_string(res.steps) + ",\"sqrt_bound\":" + std::to_string(res.sqrt_bound) +
                    ",\"pataki_bound\":" + std::to_string(res.pataki_bound) +
                    ",\"tight_achieved\":" + (res.tight_achieved ? "true" : "false") +
                    ",\"stalled\":" + (res.stalled ? "true" : "false") +
                    ",\"max_violation\":" + format_double(res.max_violation) +
                    ",\"min_eigenvalue\":" + format_double(res.min_eigenvalue) + ",\"Y\":[";
  const auto data = res.Y.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (k) out += ',';
    out += format_double(data[k]);
  }
  out += "]}\n";
  return out;
}

struct BenchArgs {
  std::string suite = "spencer-smoke";
  double C = 1.0;
  bool timing = false;
  std::string svg;
};

std::string run_bench(const Common& c, const BenchArgs& a) {
  BenchOptions opts;
  opts.C = a.C;
  opts.jobs = c.jobs;
  opts.timing = a.timing;
  std::vector<BenchRecord> records;
  const auto names = a.suite == "all" ? bench_suite_names() : std::vector<std::string>{a.suite};
  for (std::size_t k = 0; k < names.size(); ++k) {
    auto part = bench_suite(names[k], a.suite == "all" ? derive_seed(c.seed, k) : c.seed, opts);
    records.insert(records.end(), part.begin(), part.end());
  }
  if (!a.svg.empty()) {
    std::ofstream f(a.svg, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + a.svg + "' for writing");
    f << bench_svg(records);
  }
  return bench_csv(records);
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix discrepancy toolkit", "discrepancy"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Common common;
  Source source;
  SolveParams solve;
  SketchArgs sketch_args;
  RacArgs rac_args;
  RankArgs rank_args;
  BenchArgs bench_args;

  auto* gen = app.add_subcommand("gen", "Generate a matrix family as JSON");
  add_common(gen, common);
  add_source(gen, source, true);

  auto* partial = app.add_subcommand("partial", "Compute a partial coloring");
  add_common(partial, common);
  add_source(partial, source);
  add_solver(partial, solve);

  auto* color = app.add_subcommand("color", "Compute a full ±1 coloring");
  add_common(color, common);
  add_source(color, source);
  add_solver(color, solve);
  color->add_option("--n-min", solve.n_min, "Exhaustive endgame size (0 disables)");

  auto* sketch = app.add_subcommand("sketch-verify", "Monte Carlo checks of sketching bounds");
  add_common(sketch, common);
  add_source(sketch, source);
  sketch->add_option("--check", sketch_args.check, "expectation|variance|spectral|hanson-wright|decoupling|all");
  sketch->add_option("--r", sketch_args.r, "Sketch dimension");
  sketch->add_option("--trials", sketch_args.trials, "Monte Carlo trials");
  sketch->add_flag("--recentre", sketch_args.recentre, "Recentre non-traceless input");

  auto* rac = app.add_subcommand("rac-demo", "Evaluate a random access code");
  add_common(rac, common);
  rac->add_option("--protocol", rac_args.protocol, "hadamard|codebook|custom-file");
  rac->add_option("--n", rac_args.n, "Message bits");
  rac->add_option("--t", rac_args.t, "Codebook size");
  rac->add_option("--r", rac_args.r, "Repetitions for majority decoding (odd)");
  rac->add_option("--trials", rac_args.trials, "Monte Carlo trials or codebook samples");
  rac->add_option("--file", rac_args.file, "Code file for custom-file");

  auto* rank = app.add_subcommand("rank-reduce", "Reduce the rank of a spectahedron point");
  add_common(rank, common);
  rank->add_option("--input", rank_args.input, "Spectahedron JSON file");
  rank->add_option("--d", rank_args.d, "Dimension of a generated instance");
  rank->add_option("--m", rank_args.m, "Constraints of a generated instance");
  rank->add_flag("--sqrt-bound", rank_args.sqrt_bound, "Stop once rank <= 4 sqrt(m)");

  auto* bench = app.add_subcommand("bench", "Benchmark against random signing");
  add_common(bench, common);
  bench->add_option("--suite", bench_args.suite, "Suite name or 'all'");
  bench->add_option("--C", bench_args.C, "Multiplier of the Δ formula");
  bench->add_flag("--timing", bench_args.timing, "Record wall-clock time");
  bench->add_option("--svg", bench_args.svg, "Write an SVG chart");

  try {
    common.jobs = default_jobs();
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::string text;
    bool pass = true;
    if (gen->parsed()) {
      text = family_to_json(load_family(source, common.seed));
    } else if (partial->parsed()) {
      text = run_partial(source, common, solve);
    } else if (color->parsed()) {
      text = run_color(source, common, solve);
    } else if (sketch->parsed()) {
      text = run_sketch_verify(source, common, sketch_args, pass);
    } else if (rac->parsed()) {
      text = run_rac_demo(common, rac_args);
    } else if (rank->parsed()) {
      text = run_rank_reduce(common, rank_args);
    } else if (bench->parsed()) {
      text = run_bench(common, bench_args);
    }
    emit(common, text, out);
    if (!pass) {
      err << "error: at least one check failed\n";
      return 1;
    }
    return 0;
  } catch (const RetriesExhausted& e) {
    err << "error: " << e.what() << " (best integral fraction " << e.best_fraction() << ")\n";
    return 1;
  } catch (const FullColoringFailed& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const AlgorithmFailure& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace discrepancy::cli
