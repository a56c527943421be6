#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "discrepancy/matcore.hpp"

namespace discrepancy {

/// r x D matrix with i.i.d. N(0, 1/r) entries.
struct SketchMatrix {
  std::size_t r = 0;
  std::size_t D = 0;
  std::uint64_t seed = 0;
  Matrix S;
};

/// Monte Carlo summary. For plain scalar estimators mean_se = sd / √trials;
/// for derived quantities (variances, covariances) it comes from batch means.
struct SketchStats {
  std::size_t trials = 0;
  double mean = 0.0;
  double mean_se = 0.0;
  /// Sample variance of the per-trial values.
  double variance = 0.0;
  double max = 0.0;
};

/// Mean, sample variance, standard error and maximum of a sample.
SketchStats summarize(std::span<const double> values);

SketchMatrix draw_sketch(std::size_t r, std::size_t D, std::uint64_t seed);

/// <(Sy)(Sy)ᵀ, S A Sᵀ>
double sketch_quadratic_form(const Matrix& S, std::span<const double> y, const SymMatrix& A);
inline double sketch_quadratic_form(const SketchMatrix& S, std::span<const double> y, const SymMatrix& A) {
  return sketch_quadratic_form(S.S, y, A);
}

/// (1 + 1/r) yᵀAy + (‖y‖²/r) Tr A
double expected_quadratic_form(std::span<const double> y, const SymMatrix& A, std::size_t r);

/// Monte Carlo estimate of E sketch_quadratic_form over `trials` sketches.
SketchStats mc_quadratic_form(std::span<const double> y, const SymMatrix& A, std::size_t r, std::size_t trials,
                              std::uint64_t seed, std::size_t jobs = 1);

/// Returns the family itself when traceless (|Tr A_i| <= 1e-9), the
/// recentred family when `recentre`, and throws TraceError otherwise.
MatrixFamily require_traceless(const MatrixFamily& family, bool recentre);

/// C_var (‖B‖/r + Tr B/r²), B = Σ A_i².
double variance_upper_bound(const MatrixFamily& family, std::size_t r, double C_var, bool recentre = false);

/// Σ_i Var <(Sy)(Sy)ᵀ, S A_i Sᵀ>. `mean` is the summed variance; its
/// standard error comes from 20 batch means.
SketchStats empirical_variance(const MatrixFamily& family, std::span<const double> y, std::size_t r,
                               std::size_t trials, std::uint64_t seed, bool recentre = false, std::size_t jobs = 1);

/// Cov(<Sy,Sa>², <Sy,Sb>²) estimated over `trials` sketches (batch-mean SE).
SketchStats wick_variance_oracle(std::span<const double> y, std::span<const double> a, std::span<const double> b,
                                 std::size_t r, std::size_t trials, std::uint64_t seed, std::size_t jobs = 1);

/// Samples of ‖Σ_i (S A_i Sᵀ)²‖.
SketchStats sketched_family_spectral_norm(const MatrixFamily& family, std::size_t r, std::size_t trials,
                                          std::uint64_t seed, bool recentre = false, std::size_t jobs = 1);

/// Samples of ‖S M Sᵀ‖ for a fixed symmetric M.
SketchStats fixed_matrix_sketch_norm(const SymMatrix& M, std::size_t r, std::size_t trials, std::uint64_t seed,
                                     std::size_t jobs = 1);

/// λ_min(MMᵀ + MᵀM − MM − MᵀMᵀ). ShapeError unless M is square.
double psd_fact_check(const Matrix& M);

struct TensorCs {
  double lhs = 0.0;
  double rhs = 0.0;
};
/// lhs = ‖Σ B_i ⊗ A_i‖, rhs = (Σ ‖B_i‖_F²)^½ ‖Σ A_i²‖^½.
TensorCs tensor_cs_check(std::span<const SymMatrix> A, std::span<const SymMatrix> B);

struct DecouplingReport {
  SketchStats lhs;         // ‖Σ S A Sᵀ S A Sᵀ‖
  SketchStats cross;       // ‖Σ (S A Sᵀ T A Tᵀ + T A Tᵀ S A Sᵀ)‖
  SketchStats mixed;       // ‖Σ S A Tᵀ T A Sᵀ‖
  double rhs = 0.0;        // ½ cross + 2 mixed
  double combined_se = 0.0;
  bool holds = false;      // lhs <= rhs + 3 combined_se
};
DecouplingReport decoupled_norm_compare(const MatrixFamily& family, std::size_t r, std::size_t trials,
                                        std::uint64_t seed, bool recentre = false, std::size_t jobs = 1);

}  // namespace discrepancy
