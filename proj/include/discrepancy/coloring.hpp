#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/matcore.hpp"

namespace discrepancy {

struct SolveParams {
  /// Multiplier in the Δ formula.
  double C_delta = 8.0;
  /// Required integral fraction of a partial coloring.
  double eps_frac = 0.05;
  /// |x_i| >= 1 - int_tol counts as integral.
  double int_tol = 1e-4;
  /// Relative slack on ‖Σ x_i A_i‖ <= Δ.
  double feas_tol = 1e-6;
  /// Temperature of the smoothed spectral norm; 0 selects log(4d) / (0.01 Δ).
  double beta = 0.0;
  /// Projected-gradient iteration budget of one convex solve.
  std::size_t max_iters = 5000;
  /// 0 selects 10n.
  std::size_t max_retries = 0;
  /// Gradient-mapping threshold at which a solve is reported converged.
  double stall_tol = 1e-4;
  /// Explicit Δ for partial_coloring; 0 uses delta_target(family, C_delta).
  double delta = 0.0;
  /// full_coloring finishes exhaustively at this many survivors (0 disables).
  std::size_t n_min = 12;
  /// Worker threads for independent retries; 0 is one per hardware thread.
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct Round {
  std::size_t n_remaining = 0;
  double delta = 0.0;
  std::size_t retries = 0;
};

struct Coloring {
  std::vector<double> x;
  std::vector<bool> integral_mask;
  double discrepancy = 0.0;
  double delta_used = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
  /// Filled by full_coloring only.
  std::vector<Round> rounds;

  std::size_t integral_count() const;
  double integral_fraction() const;
};

/// Clamps x into [-1, 1], derives the mask and recomputes the discrepancy.
Coloring make_coloring(const MatrixFamily& family, std::vector<double> x, double delta_used, double int_tol);

/// Throws if c is not a valid coloring of `family` for its own delta_used
/// (feasibility with the given relative slack, box, mask, discrepancy).
void validate_coloring(const MatrixFamily& family, const Coloring& c, double int_tol, double rel_slack);

double evaluate_discrepancy(const MatrixFamily& family, std::span<const double> x);

/// C ‖ΣA²‖^½ √(1 + max(0, log(Tr ΣA² / (√n ‖ΣA²‖)))). DegenerateFamily if ΣA² = 0.
double delta_target(const MatrixFamily& family, double C);

/// max <g, x> subject to ‖Σ x_i A_i‖ <= Δ, x in the box. Never throws on
/// budget exhaustion; the result then has converged == false.
Coloring solve_partial_program(const MatrixFamily& family, std::span<const double> g, double delta,
                               const SolveParams& params);

class RetriesExhausted : public Error {
 public:
  RetriesExhausted(const std::string& what, Coloring best, std::size_t retries)
      : Error(what), best_(std::move(best)), retries_(retries) {}
  const Coloring& best() const noexcept { return best_; }
  double best_fraction() const { return best_.integral_fraction(); }
  std::size_t retries() const noexcept { return retries_; }

 private:
  Coloring best_;
  std::size_t retries_;
};

struct PartialResult {
  Coloring coloring;
  std::vector<double> g;
  /// Number of attempts made, including the successful one.
  std::size_t retries = 0;
};

/// Random g, solve, retry until at least max(1, ⌈eps_frac n⌉) coordinates
/// are integral. Integral coordinates come back exactly ±1.
PartialResult partial_coloring(const MatrixFamily& family, const SolveParams& params);

struct FullColoring {
  /// x in {±1}^n, rounds populated, delta_used = Δ of the first round.
  Coloring coloring;
  /// Σ of the per-round Δ; bounds the discrepancy before the endgame.
  double delta_sum = 0.0;
  /// ‖Σ z_i A_i‖ just before the exhaustive endgame (or the final value).
  double pre_endgame_discrepancy = 0.0;
  std::size_t endgame_size = 0;
};

class FullColoringFailed : public Error {
 public:
  FullColoringFailed(const std::string& what, std::vector<double> z, std::vector<Round> rounds)
      : Error(what), z_(std::move(z)), rounds_(std::move(rounds)) {}
  const std::vector<double>& partial() const noexcept { return z_; }
  const std::vector<Round>& rounds() const noexcept { return rounds_; }

 private:
  std::vector<double> z_;
  std::vector<Round> rounds_;
};

FullColoring full_coloring(const MatrixFamily& family, const SolveParams& params);

struct ExhaustiveResult {
  double value = 0.0;
  std::vector<double> signs;
};

/// min over s in {±1}^k of ‖base + Σ s_j A_{idx_j}‖ by Gray-code enumeration.
/// `base` may be empty (treated as zero). SizeError for k > 24.
ExhaustiveResult exhaustive_signs(const MatrixFamily& family, std::span<const std::size_t> idx,
                                  const SymMatrix* base = nullptr);
/// Exhaustive optimum over all 2^n signings (fixes x_0 = +1 by symmetry).
ExhaustiveResult exhaustive_optimum(const MatrixFamily& family);

struct DualWitness {
  SymMatrix Y;
  std::vector<double> per_index;
  double alignment = 0.0;
};

/// Softmax witness of M = Σ x_i A_i on diag(M, -M), folded back to
/// Y = W11 - W22 and scaled to unit nuclear norm (Y = 0 when M = 0).
/// g defaults to sign(x) with sign(0) = +1.
DualWitness extract_dual_witness(const MatrixFamily& family, const Coloring& x, double delta, double beta,
                                 std::span<const double> g = {});

std::string coloring_to_json(const Coloring& c);

}  // namespace discrepancy
