#include "discrepancy/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discrepancy/errors.hpp"
#include "discrepancy/kernels.hpp"
#include "discrepancy/parallel.hpp"
#include "discrepancy/rng.hpp"

namespace discrepancy {

namespace {

constexpr std::size_t kBatches = 20;

Matrix gaussian_matrix(std::size_t r, std::size_t D, std::uint64_t seed) {
  Rng rng(seed);
  const double sd = 1.0 / std::sqrt(static_cast<double>(r));
  std::vector<double> data(r * D);
  for (auto& v : data) v = sd * rng.normal();
  return Matrix(r, D, std::move(data));
}

// trial k -> value, evaluated on `jobs` threads; slot order is fixed so the
// result does not depend on scheduling.
template <class F>
std::vector<double> run_trials(std::size_t trials, std::size_t jobs, F&& f) {
  std::vector<double> out(trials);
  parallel_for(trials, jobs, [&](std::size_t k) { out[k] = f(k); });
  return out;
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = kernels::pairwise_sum(v) / static_cast<double>(v.size());
  std::vector<double> sq(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) sq[k] = (v[k] - m) * (v[k] - m);
  return kernels::pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

void require_trials(std::size_t trials, std::size_t minimum) {
  if (trials < minimum) throw ConfigError("need at least " + std::to_string(minimum) + " Monte Carlo trials");
}

void require_dim(std::size_t r) {
  if (r == 0) throw ConfigError("sketch dimension must be positive");
}

// Estimate of a statistic over all trials plus its batch-means standard error.
template <class Stat>
SketchStats batched(std::size_t trials, Stat&& stat) {
  SketchStats s;
  s.trials = trials;
  s.mean = stat(0, trials);
  std::vector<double> per(kBatches);
  const std::size_t len = trials / kBatches;
  for (std::size_t b = 0; b < kBatches; ++b) per[b] = stat(b * len, (b + 1) * len);
  s.variance = sample_variance(per);
  s.mean_se = std::sqrt(s.variance / static_cast<double>(kBatches));
  s.max = *std::max_element(per.begin(), per.end());
  return s;
}

SymMatrix sum_of_squares(std::span<const SymMatrix> xs) {
  std::vector<double> acc(xs.front().dim() * xs.front().dim(), 0.0);
  for (const auto& x : xs) {
    const auto sq = square(x);
    kernels::axpy(1.0, sq.data(), acc);
  }
  return SymMatrix(xs.front().dim(), std::move(acc));
}

}  // namespace

SketchStats summarize(std::span<const double> values) {
  SketchStats s;
  s.trials = values.size();
  if (values.empty()) return s;
  s.mean = kernels::pairwise_sum(values) / static_cast<double>(values.size());
  s.variance = sample_variance(values);
  s.mean_se = std::sqrt(s.variance / static_cast<double>(values.size()));
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

SketchMatrix draw_sketch(std::size_t r, std::size_t D, std::uint64_t seed) {
  if (r == 0 || D == 0) throw ConfigError("draw_sketch: dimensions must be positive");
  return {r, D, seed, gaussian_matrix(r, D, seed)};
}

double sketch_quadratic_form(const Matrix& S, std::span<const double> y, const SymMatrix& A) {
  if (S.cols() != y.size() || A.dim() != y.size()) throw ShapeError("sketch_quadratic_form: shape mismatch");
  // (Sy)ᵀ S A Sᵀ (Sy) = vᵀ A v with v = Sᵀ S y
  std::vector<double> u(S.rows());
  for (std::size_t i = 0; i < S.rows(); ++i) u[i] = kernels::dot(S.row(i), y);
  std::vector<double> v(S.cols(), 0.0);
  for (std::size_t i = 0; i < S.rows(); ++i) kernels::axpy(u[i], S.row(i), v);
  return quadratic_form(A, v);
}

double expected_quadratic_form(std::span<const double> y, const SymMatrix& A, std::size_t r) {
  require_dim(r);
  if (A.dim() != y.size()) throw ShapeError("expected_quadratic_form: shape mismatch");
  const double rr = static_cast<double>(r);
  const double yy = dot(y, y);
  return (1.0 + 1.0 / rr) * quadratic_form(A, y) + (yy / rr) * A.trace();
}

SketchStats mc_quadratic_form(std::span<const double> y, const SymMatrix& A, std::size_t r, std::size_t trials,
                              std::uint64_t seed, std::size_t jobs) {
  require_dim(r);
  require_trials(trials, 2);
  const auto vals = run_trials(trials, jobs, [&](std::size_t k) {
    return sketch_quadratic_form(gaussian_matrix(r, y.size(), derive_seed(seed, k)), y, A);
  });
  return summarize(vals);
}

MatrixFamily require_traceless(const MatrixFamily& family, bool recentre) {
  if (family.max_abs_trace() <= 1e-9) return family;
  if (recentre) return family.recentred();
  throw TraceError("family is not traceless (max |Tr A_i| = " + std::to_string(family.max_abs_trace()) + ")");
}

double variance_upper_bound(const MatrixFamily& family, std::size_t r, double C_var, bool recentre) {
  require_dim(r);
  const MatrixFamily f = require_traceless(family, recentre);
  const double rr = static_cast<double>(r);
  return C_var * (f.sum_sq_norm() / rr + f.sum_sq_trace() / (rr * rr));
}

SketchStats empirical_variance(const MatrixFamily& family, std::span<const double> y, std::size_t r,
                               std::size_t trials, std::uint64_t seed, bool recentre, std::size_t jobs) {
  require_dim(r);
  require_trials(trials, 2 * kBatches);
  const MatrixFamily f = require_traceless(family, recentre);
  if (y.size() != f.dim()) throw ShapeError("empirical_variance: y has the wrong length");
  const std::size_t n = f.size();
  std::vector<double> q(trials * n);
  parallel_for(trials, jobs, [&](std::size_t k) {
    const Matrix S = gaussian_matrix(r, f.dim(), derive_seed(seed, k));
    for (std::size_t i = 0; i < n; ++i) q[k * n + i] = sketch_quadratic_form(S, y, f[i]);
  });
  return batched(trials, [&](std::size_t lo, std::size_t hi) {
    double total = 0.0;
    std::vector<double> col(hi - lo);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = lo; k < hi; ++k) col[k - lo] = q[k * n + i];
      total += sample_variance(col);
    }
    return total;
  });
}

SketchStats wick_variance_oracle(std::span<const double> y, std::span<const double> a, std::span<const double> b,
                                 std::size_t r, std::size_t trials, std::uint64_t seed, std::size_t jobs) {
  require_dim(r);
  require_trials(trials, 2 * kBatches);
  if (a.size() != y.size() || b.size() != y.size()) throw ShapeError("wick_variance_oracle: length mismatch");
  const std::size_t D = y.size();
  std::vector<double> xs(trials), ys(trials);
  parallel_for(trials, jobs, [&](std::size_t k) {
    const Matrix S = gaussian_matrix(r, D, derive_seed(seed, k));
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      const double sy = kernels::dot(S.row(i), y);
      pa += sy * kernels::dot(S.row(i), a);
      pb += sy * kernels::dot(S.row(i), b);
    }
    xs[k] = pa * pa;
    ys[k] = pb * pb;
  });
  return batched(trials, [&](std::size_t lo, std::size_t hi) {
    const std::span<const double> x(xs.data() + lo, hi - lo), w(ys.data() + lo, hi - lo);
    const double mx = kernels::pairwise_sum(x) / static_cast<double>(x.size());
    const double mw = kernels::pairwise_sum(w) / static_cast<double>(w.size());
    std::vector<double> prod(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) prod[k] = (x[k] - mx) * (w[k] - mw);
    return kernels::pairwise_sum(prod) / static_cast<double>(x.size() - 1);
  });
}

SketchStats sketched_family_spectral_norm(const MatrixFamily& family, std::size_t r, std::size_t trials,
                                          std::uint64_t seed, bool recentre, std::size_t jobs) {
  require_dim(r);
  require_trials(trials, 2);
  const MatrixFamily f = require_traceless(family, recentre);
  const auto vals = run_trials(trials, jobs, [&](std::size_t k) {
    const Matrix S = gaussian_matrix(r, f.dim(), derive_seed(seed, k));
    std::vector<SymMatrix> b;
    b.reserve(f.size());
    for (const auto& a : f.matrices()) b.push_back(congruence(S, a));
    return spectral_norm(sum_of_squares(b));
  });
  return summarize(vals);
}

SketchStats fixed_matrix_sketch_norm(const SymMatrix& M, std::size_t r, std::size_t trials, std::uint64_t seed,
                                     std::size_t jobs) {
  require_dim(r);
  require_trials(trials, 2);
  const auto vals = run_trials(trials, jobs, [&](std::size_t k) {
    return spectral_norm(congruence(gaussian_matrix(r, M.dim(), derive_seed(seed, k)), M));
  });
  return summarize(vals);
}

double psd_fact_check(const Matrix& M) {
  if (!M.square()) throw ShapeError("psd_fact_check: matrix must be square");
  if (M.rows() == 0) return 0.0;
  const Matrix Mt = M.transpose();
  const Matrix diff = multiply(M, Mt) + multiply(Mt, M) - multiply(M, M) - multiply(Mt, Mt);
  return min_eigenvalue(SymMatrix(diff));
}

TensorCs tensor_cs_check(std::span<const SymMatrix> A, std::span<const SymMatrix> B) {
  if (A.size() != B.size()) throw ShapeError("tensor_cs_check: list lengths differ");
  if (A.empty()) return {};
  const std::size_t d = A.front().dim();
  const std::size_t k = B.front().dim();
  Matrix sum(k * d, k * d);
  double frob = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].dim() != d || B[i].dim() != k) throw ShapeError("tensor_cs_check: dimension mismatch");
    sum = sum + kron(B[i].to_matrix(), A[i].to_matrix());
    const double f = frobenius_norm(B[i]);
    frob += f * f;
  }
  const SymMatrix asq = sum_of_squares(A);
  return {spectral_norm(SymMatrix(sum)), std::sqrt(frob) * std::sqrt(spectral_norm(asq))};
}

DecouplingReport decoupled_norm_compare(const MatrixFamily& family, std::size_t r, std::size_t trials,
                                        std::uint64_t seed, bool recentre, std::size_t jobs) {
  require_dim(r);
  require_trials(trials, 2);
  const MatrixFamily f = require_traceless(family, recentre);
  std::vector<double> lhs(trials), cross(trials), mixed(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const Matrix S = gaussian_matrix(r, f.dim(), derive_seed(seed, t, 0));
    const Matrix T = gaussian_matrix(r, f.dim(), derive_seed(seed, t, 1));
    Matrix l(r, r), c(r, r), m(r, r);
    for (const auto& a : f.matrices()) {
      const Matrix x = congruence(S, a).to_matrix();
      const Matrix y = congruence(T, a).to_matrix();
      const Matrix p = multiply_nt(multiply(S, a.to_matrix()), T);  // S A Tᵀ
      l = l + multiply(x, x);
      c = c + multiply(x, y) + multiply(y, x);
      m = m + multiply_nt(p, p);
    }
    lhs[t] = spectral_norm(SymMatrix(l));
    cross[t] = spectral_norm(SymMatrix(c));
    mixed[t] = spectral_norm(SymMatrix(m));
  });
  DecouplingReport rep;
  rep.lhs = summarize(lhs);
  rep.cross = summarize(cross);
  rep.mixed = summarize(mixed);
  rep.rhs = 0.5 * rep.cross.mean + 2.0 * rep.mixed.mean;
  rep.combined_se = std::sqrt(rep.lhs.mean_se * rep.lhs.mean_se + 0.25 * rep.cross.mean_se * rep.cross.mean_se +
                              4.0 * rep.mixed.mean_se * rep.mixed.mean_se);
  rep.holds = rep.lhs.mean <= rep.rhs + 3.0 * rep.combined_se;
  return rep;
}

}  // namespace discrepancy
