#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "discrepancy/matrix.hpp"

namespace discrepancy {

/// Eigendecomposition of a symmetric matrix. values are sorted descending;
/// row k of `vectors` is the unit eigenvector belonging to values[k].
struct Spectrum {
  std::vector<double> values;
  Matrix vectors;

  std::span<const double> vector(std::size_t k) const { return vectors.row(k); }
};

/// Householder tridiagonalisation followed by implicit-shift QL.
Spectrum eig_sym(const SymMatrix& m);
/// Eigenvalues only, sorted descending. Cheaper than eig_sym.
std::vector<double> eigvals_sym(const SymMatrix& m);

/// Σ_k f(λ_k) q_k q_k^T
SymMatrix spectral_apply(const Spectrum& s, const std::function<double(double)>& f);
/// Q diag(values) Q^T
SymMatrix reconstruct(const Spectrum& s);

double spectral_norm(const SymMatrix& m);
double nuclear_norm(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);
/// Largest singular value of an arbitrary matrix.
double operator_norm(const Matrix& m);

/// [[0, B], [B^T, 0]]
SymMatrix hermitian_dilation(const Matrix& b);

struct PsdSplit {
  SymMatrix plus;   // ⪰ 0
  SymMatrix minus;  // ⪯ 0
};
PsdSplit psd_split(const SymMatrix& y);

struct FamilyMeta {
  std::string kind;
  std::uint64_t seed = 0;
};

/// Ordered family of symmetric matrices of common dimension, with the
/// aggregate statistics of Σ A_i² computed once on construction.
class MatrixFamily {
 public:
  /// Throws ConfigError on an empty list and ShapeError on mixed dimensions.
  explicit MatrixFamily(std::vector<SymMatrix> matrices, FamilyMeta meta = {});

  std::size_t size() const noexcept { return matrices_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<SymMatrix>& matrices() const noexcept { return matrices_; }
  const SymMatrix& operator[](std::size_t i) const { return matrices_[i]; }
  const FamilyMeta& meta() const noexcept { return meta_; }

  /// Σ A_i²
  const SymMatrix& sum_sq() const noexcept { return sum_sq_; }
  /// ‖Σ A_i²‖
  double sum_sq_norm() const noexcept { return sum_sq_norm_; }
  /// Tr Σ A_i²
  double sum_sq_trace() const noexcept { return sum_sq_trace_; }
  const std::vector<double>& spectral_norms() const noexcept { return spectral_norms_; }
  const std::vector<double>& frobenius_norms() const noexcept { return frobenius_norms_; }

  /// Σ x_i A_i
  SymMatrix combine(std::span<const double> x) const;
  /// Every matrix multiplied by s.
  MatrixFamily scaled(double s) const;
  /// A_i ← A_i − (Tr A_i / d) I.
  MatrixFamily recentred() const;
  /// max_i |Tr A_i|
  double max_abs_trace() const;

 private:
  std::vector<SymMatrix> matrices_;
  FamilyMeta meta_;
  std::size_t dim_ = 0;
  SymMatrix sum_sq_;
  double sum_sq_norm_ = 0.0;
  double sum_sq_trace_ = 0.0;
  std::vector<double> spectral_norms_;
  std::vector<double> frobenius_norms_;
};

struct BlockDilation {
  SymMatrix y_block;
  MatrixFamily family_block;
};

/// Y → diag(Y⁺, −Y⁻), A_i → diag(A_i, −A_i).
BlockDilation block_dilate_pair(const SymMatrix& y, const MatrixFamily& family);

enum class FamilyKind { Zero, GaussianUnit, DiagonalVectors, HadamardRows, SparseDiagonal, ModerateRank };

FamilyKind parse_family_kind(std::string_view name);
std::string_view family_kind_name(FamilyKind kind);

struct GenSpec {
  FamilyKind kind = FamilyKind::GaussianUnit;
  std::size_t n = 0;
  std::size_t d = 0;
  /// moderate_rank: number of ±1 eigenvalues (0 selects ⌈√n⌉).
  std::size_t rank = 0;
  /// sparse_diagonal: number of leading diagonal entries in use (0 selects ⌈√n⌉).
  std::size_t support = 0;
};

/// Deterministic in (spec, seed). Every generated matrix has spectral norm ≤ 1.
MatrixFamily gen_family(const GenSpec& spec, std::uint64_t seed);

/// Sylvester Hadamard matrix of order n (a power of two).
Matrix hadamard(std::size_t n);

// Family files are a single JSON document:
//   {"version":1,"n":N,"d":D,"matrices":[[row-major D*D], ...],
//    "meta":{"kind":str,"seed":int}}
// with every float printed to 17 significant digits.
std::string family_to_json(const MatrixFamily& family);
MatrixFamily family_from_json(std::string_view text);
void write_family(const MatrixFamily& family, const std::filesystem::path& path);
MatrixFamily read_family(const std::filesystem::path& path);

/// printf "%.17g"; round-trips every finite double. Non-finite throws.
std::string format_double(double v);

}  // namespace discrepancy
