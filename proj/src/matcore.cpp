#include "discrepancy/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discrepancy/errors.hpp"
#include "discrepancy/kernels.hpp"
#include "discrepancy/rng.hpp"

namespace discrepancy {

SymMatrix hermitian_dilation(const Matrix& b) {
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  const std::size_t n = p + q;
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      out[i * n + (p + j)] = b(i, j);
      out[(p + j) * n + i] = b(i, j);
    }
  return SymMatrix(n, std::move(out));
}

PsdSplit psd_split(const SymMatrix& y) {
  const Spectrum s = eig_sym(y);
  return {spectral_apply(s, [](double v) { return v > 0.0 ? v : 0.0; }),
          spectral_apply(s, [](double v) { return v < 0.0 ? v : 0.0; })};
}

MatrixFamily::MatrixFamily(std::vector<SymMatrix> matrices, FamilyMeta meta)
    : matrices_(std::move(matrices)), meta_(std::move(meta)) {
  if (matrices_.empty()) throw ConfigError("matrix family must contain at least one matrix");
  dim_ = matrices_.front().dim();
  if (dim_ == 0) throw ShapeError("matrix family has dimension zero");
  std::vector<double> acc(dim_ * dim_, 0.0);
  spectral_norms_.reserve(matrices_.size());
  frobenius_norms_.reserve(matrices_.size());
  for (const auto& a : matrices_) {
    if (a.dim() != dim_) {
      throw ShapeError("matrix family mixes dimensions " + std::to_string(dim_) + " and " + std::to_string(a.dim()));
    }
    kernels::gemm_acc(a.data().data(), a.data().data(), acc.data(), dim_, dim_, dim_);
    spectral_norms_.push_back(spectral_norm(a));
    frobenius_norms_.push_back(frobenius_norm(a));
  }
  sum_sq_ = SymMatrix(dim_, std::move(acc));
  sum_sq_norm_ = spectral_norm(sum_sq_);
  sum_sq_trace_ = sum_sq_.trace();
}

SymMatrix MatrixFamily::combine(std::span<const double> x) const {
  if (x.size() != matrices_.size()) {
    throw ShapeError("coefficient vector has length " + std::to_string(x.size()) + ", family has " +
                     std::to_string(matrices_.size()) + " matrices");
  }
  return linear_combination(x, matrices_);
}

MatrixFamily MatrixFamily::scaled(double s) const {
  std::vector<SymMatrix> out;
  out.reserve(matrices_.size());
  for (const auto& a : matrices_) out.push_back(s * a);
  return MatrixFamily(std::move(out), meta_);
}

MatrixFamily MatrixFamily::recentred() const {
  std::vector<SymMatrix> out;
  out.reserve(matrices_.size());
  const auto eye = SymMatrix::identity(dim_);
  for (const auto& a : matrices_) out.push_back(a - (a.trace() / static_cast<double>(dim_)) * eye);
  return MatrixFamily(std::move(out), meta_);
}

double MatrixFamily::max_abs_trace() const {
  double m = 0.0;
  for (const auto& a : matrices_) m = std::max(m, std::abs(a.trace()));
  return m;
}

namespace {

SymMatrix block_diag(const SymMatrix& a, const SymMatrix& b) {
  const std::size_t p = a.dim();
  const std::size_t n = p + b.dim();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) out[i * n + j] = a(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[(p + i) * n + (p + j)] = b(i, j);
  return SymMatrix(n, std::move(out));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t ceil_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

// r orthonormal vectors from Gaussian draws (modified Gram-Schmidt, two passes).
std::vector<std::vector<double>> random_orthonormal(std::size_t d, std::size_t r, Rng& rng) {
  std::vector<std::vector<double>> q;
  q.reserve(r);
  while (q.size() < r) {
    auto v = rng.normal_vector(d);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) kernels::axpy(-kernels::dot(u, v), u, v);
    }
    const double nv = norm2(v);
    if (nv < 1e-8) continue;
    kernels::scale(1.0 / nv, v, v);
    q.push_back(std::move(v));
  }
  return q;
}

SymMatrix gen_one(const GenSpec& spec, std::size_t index, Rng& rng, const Matrix& had) {
  const std::size_t d = spec.d;
  switch (spec.kind) {
    case FamilyKind::Zero:
      return SymMatrix(d);
    case FamilyKind::GaussianUnit: {
      std::vector<double> g(d * d);
      for (auto& v : g) v = rng.normal();
      std::vector<double> s(d * d);
      const double inv = 1.0 / std::sqrt(2.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s[i * d + j] = (g[i * d + j] + g[j * d + i]) * inv;
      SymMatrix a(d, std::move(s));
      const double nrm = spectral_norm(a);
      return nrm > 0.0 ? (1.0 / nrm) * a : a;
    }
    case FamilyKind::DiagonalVectors: {
      return SymMatrix::diagonal(rng.rademacher_vector(d));
    }
    case FamilyKind::HadamardRows: {
      return SymMatrix::diagonal(had.row(index));
    }
    case FamilyKind::SparseDiagonal: {
      std::vector<double> diag(d, 0.0);
      for (std::size_t k = 0; k < spec.support; ++k) diag[k] = rng.rademacher();
      return SymMatrix::diagonal(diag);
    }
    case FamilyKind::ModerateRank: {
      const auto q = random_orthonormal(d, spec.rank, rng);
      std::vector<double> acc(d * d, 0.0);
      for (const auto& u : q) {
        const double sign = rng.rademacher();
        for (std::size_t i = 0; i < d; ++i) kernels::axpy(sign * u[i], u, std::span<double>(acc).subspan(i * d, d));
      }
      return SymMatrix(d, std::move(acc));
    }
  }
  throw ConfigError("unknown family kind");
}

}  // namespace

BlockDilation block_dilate_pair(const SymMatrix& y, const MatrixFamily& family) {
  if (y.dim() != family.dim()) {
    throw ShapeError("block_dilate_pair: Y has dimension " + std::to_string(y.dim()) + ", family has " +
                     std::to_string(family.dim()));
  }
  const PsdSplit split = psd_split(y);
  SymMatrix y_block = block_diag(split.plus, -split.minus);
  std::vector<SymMatrix> blocks;
  blocks.reserve(family.size());
  for (const auto& a : family.matrices()) blocks.push_back(block_diag(a, -a));
  return {std::move(y_block), MatrixFamily(std::move(blocks), family.meta())};
}

FamilyKind parse_family_kind(std::string_view name) {
  if (name == "zero") return FamilyKind::Zero;
  if (name == "gaussian_unit") return FamilyKind::GaussianUnit;
  if (name == "diagonal_vectors") return FamilyKind::DiagonalVectors;
  if (name == "hadamard_rows") return FamilyKind::HadamardRows;
  if (name == "sparse_diagonal") return FamilyKind::SparseDiagonal;
  if (name == "moderate_rank") return FamilyKind::ModerateRank;
  throw ConfigError("unknown family kind '" + std::string(name) + "'");
}

std::string_view family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Zero:
      return "zero";
    case FamilyKind::GaussianUnit:
      return "gaussian_unit";
    case FamilyKind::DiagonalVectors:
      return "diagonal_vectors";
    case FamilyKind::HadamardRows:
      return "hadamard_rows";
    case FamilyKind::SparseDiagonal:
      return "sparse_diagonal";
    case FamilyKind::ModerateRank:
      return "moderate_rank";
  }
  return "unknown";
}

Matrix hadamard(std::size_t n) {
  if (!is_power_of_two(n)) throw ConfigError("Hadamard order must be a power of two, got " + std::to_string(n));
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = (__builtin_popcountll(i & j) & 1) ? -1.0 : 1.0;
  return h;
}

MatrixFamily gen_family(const GenSpec& in, std::uint64_t seed) {
  GenSpec spec = in;
  if (spec.n == 0 || spec.d == 0) throw ConfigError("family size and dimension must be positive");
  Matrix had;
  switch (spec.kind) {
    case FamilyKind::HadamardRows:
      if (!is_power_of_two(spec.d)) throw ConfigError("hadamard_rows requires d to be a power of two");
      if (spec.n > spec.d) throw ConfigError("hadamard_rows requires n <= d");
      had = hadamard(spec.d);
      break;
    case FamilyKind::SparseDiagonal:
      if (spec.support == 0) spec.support = ceil_sqrt(spec.n);
      if (spec.support > spec.d) throw ConfigError("sparse_diagonal support exceeds dimension");
      break;
    case FamilyKind::ModerateRank:
      if (spec.rank == 0) spec.rank = ceil_sqrt(spec.n);
      if (spec.rank > spec.d) throw ConfigError("moderate_rank rank exceeds dimension");
      break;
    default:
      break;
  }
  std::vector<SymMatrix> mats;
  mats.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    Rng rng(derive_seed(seed, i));
    mats.push_back(gen_one(spec, i, rng, had));
  }
  return MatrixFamily(std::move(mats), FamilyMeta{std::string(family_kind_name(spec.kind)), seed});
}

}  // namespace discrepancy
