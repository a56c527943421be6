#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discrepancy/coloring.hpp"
#include "discrepancy/matcore.hpp"

namespace discrepancy {

struct BaselineStats {
  double median = 0.0;
  double mean = 0.0;
  std::vector<double> samples;
};

/// ‖Σ x_i A_i‖ over `draws` uniform sign vectors; draw k uses derive_seed(seed, k).
BaselineStats random_signing_baseline(const MatrixFamily& family, std::size_t draws, std::uint64_t seed,
                                      std::size_t jobs = 1);

struct BenchRecord {
  std::string suite;
  std::size_t instance = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::string kind;
  double algo_disc = 0.0;
  double baseline_median = 0.0;
  double baseline_mean = 0.0;
  double delta_target = 0.0;
  double ratio_algo_over_sqrt_n = 0.0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  /// Exhaustive optimum, for instances small enough to enumerate.
  std::optional<double> optimum;
};

struct BenchOptions {
  /// Multiplier of the Δ formula handed to full_coloring.
  double C = 1.0;
  std::size_t baseline_draws = 200;
  std::size_t jobs = 1;
  /// Record wall-clock time; off by default so output is reproducible.
  bool timing = false;
};

std::vector<std::string> bench_suite_names();

struct BenchInstance {
  std::string suite;
  std::string kind;
  GenSpec spec;
  bool with_optimum = false;
};
/// Instances of a suite; ConfigError for unknown names.
std::vector<BenchInstance> bench_instances(std::string_view suite);

/// Runs every instance (up to opts.jobs concurrently); instance k is
/// generated and solved with derive_seed(seed, k). Each coloring is
/// re-validated before its record is emitted.
std::vector<BenchRecord> bench_suite(std::string_view suite, std::uint64_t seed, const BenchOptions& opts = {});

/// Checks x in {±1}^n, mask, and the reported discrepancy; throws InfeasibleInput.
void validate_signing(const MatrixFamily& family, const Coloring& c);

std::string bench_csv_header();
std::string bench_csv(const std::vector<BenchRecord>& records, bool header = true);

/// Static SVG line chart of algorithm and baseline discrepancy against n.
std::string bench_svg(const std::vector<BenchRecord>& records);

}  // namespace discrepancy
