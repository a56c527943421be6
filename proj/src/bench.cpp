#include "discrepancy/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "discrepancy/errors.hpp"
#include "discrepancy/parallel.hpp"
#include "discrepancy/rng.hpp"

namespace discrepancy {

namespace {

constexpr std::size_t kOptimumLimit = 16;

BenchInstance inst(std::string suite, FamilyKind kind, std::size_t n, std::size_t d, std::size_t support = 0) {
  BenchInstance b;
  b.suite = std::move(suite);
  b.kind = std::string(family_kind_name(kind));
  b.spec.kind = kind;
  b.spec.n = n;
  b.spec.d = d;
  b.spec.support = support;
  b.with_optimum = n <= kOptimumLimit && kind != FamilyKind::Zero;
  return b;
}

std::string csv_double(double v) { return format_double(v); }

}  // namespace

BaselineStats random_signing_baseline(const MatrixFamily& family, std::size_t draws, std::uint64_t seed,
                                      std::size_t jobs) {
  if (draws == 0) throw ConfigError("baseline needs at least one draw");
  BaselineStats out;
  out.samples.resize(draws);
  parallel_for(draws, jobs, [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    const auto x = rng.rademacher_vector(family.size());
    out.samples[k] = evaluate_discrepancy(family, x);
  });
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  out.median = draws % 2 ? sorted[draws / 2] : 0.5 * (sorted[draws / 2 - 1] + sorted[draws / 2]);
  out.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(draws);
  return out;
}

std::vector<std::string> bench_suite_names() {
  return {"spencer-smoke", "sparse-diagonal", "hadamard", "gaussian", "moderate-rank", "zero"};
}

std::vector<BenchInstance> bench_instances(std::string_view suite) {
  const std::string s(suite);
  std::vector<BenchInstance> out;
  if (s == "spencer-smoke") {
    out.push_back(inst(s, FamilyKind::GaussianUnit, 8, 8));
    out.push_back(inst(s, FamilyKind::ModerateRank, 8, 8));
    out.push_back(inst(s, FamilyKind::DiagonalVectors, 8, 8));
  } else if (s == "sparse-diagonal") {
    for (int k = 0; k < 10; ++k) out.push_back(inst(s, FamilyKind::SparseDiagonal, 64, 64, 8));
  } else if (s == "hadamard") {
    for (std::size_t n : {4, 8, 16}) out.push_back(inst(s, FamilyKind::HadamardRows, n, n));
  } else if (s == "gaussian") {
    for (std::size_t n : {8, 16, 32}) out.push_back(inst(s, FamilyKind::GaussianUnit, n, n));
  } else if (s == "moderate-rank") {
    for (std::size_t n : {8, 16, 32}) out.push_back(inst(s, FamilyKind::ModerateRank, n, n));
  } else if (s == "zero") {
    out.push_back(inst(s, FamilyKind::Zero, 8, 8));
  } else {
    throw ConfigError("unknown bench suite '" + s + "'");
  }
  return out;
}

void validate_signing(const MatrixFamily& family, const Coloring& c) {
  if (c.x.size() != family.size() || c.integral_mask.size() != family.size())
    throw InfeasibleInput("signing length differs from family size");
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    if (c.x[i] != 1.0 && c.x[i] != -1.0) throw InfeasibleInput("signing is not in {±1} at " + std::to_string(i));
    if (!c.integral_mask[i]) throw InfeasibleInput("integrality mask inconsistent at " + std::to_string(i));
  }
  const double disc = evaluate_discrepancy(family, c.x);
  if (std::abs(disc - c.discrepancy) > 1e-8 * std::max(1.0, disc))
    throw InfeasibleInput("reported discrepancy does not match recomputation");
}

std::vector<BenchRecord> bench_suite(std::string_view suite, std::uint64_t seed, const BenchOptions& opts) {
  if (!(opts.C > 0.0)) throw ConfigError("bench: C must be positive");
  const auto instances = bench_instances(suite);
  std::vector<BenchRecord> out(instances.size());
  parallel_for(instances.size(), opts.jobs, [&](std::size_t k) {
    const auto& b = instances[k];
    const std::uint64_t iseed = derive_seed(seed, k);
    const auto start = std::chrono::steady_clock::now();
    const MatrixFamily family = gen_family(b.spec, derive_seed(iseed, 0));

    SolveParams params;
    params.C_delta = opts.C;
    params.seed = derive_seed(iseed, 1);
    const FullColoring full = full_coloring(family, params);
    validate_signing(family, full.coloring);
    const BaselineStats base = random_signing_baseline(family, opts.baseline_draws, derive_seed(iseed, 2));

    BenchRecord& r = out[k];
    r.suite = b.suite;
    r.instance = k;
    r.n = family.size();
    r.d = family.dim();
    r.kind = b.kind;
    r.algo_disc = full.coloring.discrepancy;
    r.baseline_median = base.median;
    r.baseline_mean = base.mean;
    r.delta_target = family.sum_sq_norm() > 0.0 ? delta_target(family, opts.C) : 0.0;
    r.ratio_algo_over_sqrt_n = r.algo_disc / std::sqrt(static_cast<double>(r.n));
    r.seed = iseed;
    if (b.with_optimum) r.optimum = exhaustive_optimum(family).value;
    if (opts.timing)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  return out;
}

std::string bench_csv_header() {
  return "suite,instance,n,d,kind,algo_disc,baseline_median,baseline_mean,delta_target,ratio_algo_over_sqrt_n,"
         "wall_ms,seed,optimum\n";
}

std::string bench_csv(const std::vector<BenchRecord>& records, bool header) {
  std::string out = header ? bench_csv_header() : std::string();
  for (const auto& r : records) {
    out += r.suite + ',' + std::to_string(r.instance) + ',' + std::to_string(r.n) + ',' + std::to_string(r.d) + ',' +
           r.kind + ',' + csv_double(r.algo_disc) + ',' + csv_double(r.baseline_median) + ',' +
           csv_double(r.baseline_mean) + ',' + csv_double(r.delta_target) + ',' +
           csv_double(r.ratio_algo_over_sqrt_n) + ',' + csv_double(r.wall_ms) + ',' + std::to_string(r.seed) + ',' +
           (r.optimum ? csv_double(*r.optimum) : std::string()) + '\n';
  }
  return out;
}

std::string bench_svg(const std::vector<BenchRecord>& records) {
  // mean over instances sharing n
  std::map<std::size_t, std::pair<double, double>> sums;
  std::map<std::size_t, int> counts;
  for (const auto& r : records) {
    sums[r.n].first += r.algo_disc;
    sums[r.n].second += r.baseline_median;
    ++counts[r.n];
  }
  const double W = 640, H = 400, pad = 50;
  double xmax = 1, ymax = 1e-9;
  for (const auto& [n, s] : sums) {
    xmax = std::max(xmax, static_cast<double>(n));
    ymax = std::max({ymax, s.first / counts[n], s.second / counts[n]});
  }
  auto px = [&](double n) { return pad + (W - 2 * pad) * n / xmax; };
  auto py = [&](double v) { return H - pad - (H - 2 * pad) * v / (1.05 * ymax); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::string algo, base;
  for (const auto& [n, s] : sums) {
    const double c = counts[n];
    algo += fmt(px(static_cast<double>(n))) + ',' + fmt(py(s.first / c)) + ' ';
    base += fmt(px(static_cast<double>(n))) + ',' + fmt(py(s.second / c)) + ' ';
  }
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<line x1=\"50\" y1=\"350\" x2=\"590\" y2=\"350\" stroke=\"black\"/>\n";
  svg += "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"350\" stroke=\"black\"/>\n";
  svg += "<text x=\"320\" y=\"390\" text-anchor=\"middle\">n (max " + fmt(xmax) + ")</text>\n";
  svg += "<text x=\"15\" y=\"40\">discrepancy (max " + fmt(ymax) + ")</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"" + algo + "\"/>\n";
  svg += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"" + base + "\"/>\n";
  svg += "<text x=\"460\" y=\"70\" fill=\"#1f77b4\">algorithm</text>\n";
  svg += "<text x=\"460\" y=\"90\" fill=\"#d62728\">random median</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace discrepancy
