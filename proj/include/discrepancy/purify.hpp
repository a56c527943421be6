#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "discrepancy/matcore.hpp"

namespace discrepancy {

/// PSD, unit-trace symmetric matrix. Construction validates both
/// (λ_min >= -1e-9, |Tr - 1| <= 1e-9) and throws InvalidMatrix otherwise.
class DensityMatrix {
 public:
  explicit DensityMatrix(SymMatrix m);

  const SymMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  const Spectrum& spectrum() const noexcept { return spec_; }
  /// Eigenvalues above 1e-10 · trace.
  std::size_t rank() const noexcept { return rank_; }

 private:
  SymMatrix m_;
  Spectrum spec_;
  std::size_t rank_ = 0;
};

/// Real unit vector (|‖y‖ - 1| <= 1e-10, InvalidMatrix otherwise).
class PureState {
 public:
  explicit PureState(std::vector<double> v);
  std::size_t dim() const noexcept { return v_.size(); }
  std::span<const double> vector() const noexcept { return v_; }

 private:
  std::vector<double> v_;
};

/// y' = Σ_k √λ_k u_k ⊗ e_k over the numerical rank t; index of (i, k) is i t + k,
/// so (y')ᵀ (A ⊗ I_t) y' = <Y, A>.
PureState purify(const DensityMatrix& Y);

struct Constraint {
  SymMatrix A;
  double b = 0.0;
};

struct RankReduceOptions {
  /// false: reduce until ρ(ρ+1)/2 <= m (the classical bound).
  /// true: stop as soon as ρ <= 4√m.
  bool stop_at_sqrt_bound = false;
  std::size_t max_steps = 10000;
};

struct RankReduceResult {
  SymMatrix Y;
  std::size_t rank = 0;
  std::size_t initial_rank = 0;
  std::size_t steps = 0;
  /// ⌊4√m⌋
  std::size_t sqrt_bound = 0;
  /// ⌊(√(8m+1) − 1)/2⌋
  std::size_t pataki_bound = 0;
  bool tight_achieved = false;
  bool stalled = false;
  double max_violation = 0.0;
  double min_eigenvalue = 0.0;
};

/// Null-space steps Y <- V (I − Λ/μ_max) Vᵀ that keep every <A_i, Y> fixed
/// and drop the rank by at least one. InfeasibleInput if Y0 violates a
/// constraint by more than 1e-8 or has λ_min < −1e-9.
RankReduceResult rank_reduce(std::span<const Constraint> constraints, const SymMatrix& Y0,
                             const RankReduceOptions& opts = {});

std::size_t numerical_rank(const SymMatrix& Y);

/// G Gᵀ / Tr with G a d x rank Gaussian matrix.
DensityMatrix random_density_matrix(std::size_t d, std::size_t rank, std::uint64_t seed);

struct Spectahedron {
  std::vector<Constraint> constraints;
  SymMatrix Y0;
};

/// Tr Y = 1 plus m − 1 Gaussian constraints, all satisfied by a full-rank
/// random density matrix Y0.
Spectahedron random_spectahedron(std::size_t d, std::size_t m, std::uint64_t seed);

struct PtsOptions {
  /// Goodness constant: tolerance multiplier and norm window [1/C, C].
  double C = 10.0;
  /// Constant of the reported ‖Σ B_i²‖ bound.
  double C_norm = 50.0;
  /// Test hook: S = identity (requires r = d t).
  bool identity_sketch = false;
  /// Materialise every B_i and ‖Σ B_i²‖.
  bool keep_matrices = false;
  /// Recentre non-traceless families instead of throwing TraceError.
  bool recentre = false;
  std::size_t jobs = 1;
};

struct PtsEntry {
  /// Sy' / ‖Sy'‖
  PureState y{std::vector<double>{1.0}};
  double norm_sq = 0.0;  // ‖Sy'‖²
  double c_g = 0.0;      // 1 / ‖Sy'‖²
  std::size_t t = 0;
  double tol = 0.0;
  std::vector<double> forms;    // <(Sy')(Sy')ᵀ, B_i>
  std::vector<double> targets;  // <Y, A_i>
  std::size_t good_indices = 0;
  bool good = false;
  std::vector<SymMatrix> B;  // only with keep_matrices
  double sum_sq_norm = 0.0;  // ‖Σ B_i²‖, only with keep_matrices
  double sum_sq_bound = 0.0;
};

struct PtsReport {
  std::vector<PtsEntry> entries;
  double good_fraction = 0.0;
};

/// Purify each Y, lift A_i to A_i ⊗ I_t, sketch to dimension r with
/// B_i = (r/(r+1)) S A'_i Sᵀ. Entry j uses sketch seed derive_seed(seed, j).
/// Good: at least (1 − δ) n indices with |<uuᵀ, B_i> − <Y, A_i>| <= tol and
/// 1/C <= ‖u‖² <= C, where u = Sy' and
/// tol = C √(‖ΣA_i²‖/(n r) + t Tr ΣA_i²/(n r²)).
PtsReport purify_then_sketch(std::span<const DensityMatrix> Y_list, const MatrixFamily& family, std::size_t r,
                             double delta, std::uint64_t seed, const PtsOptions& opts = {});

}  // namespace discrepancy
