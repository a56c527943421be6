#include "discrepancy/purify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discrepancy/errors.hpp"
#include "discrepancy/kernels.hpp"
#include "discrepancy/parallel.hpp"
#include "discrepancy/rng.hpp"
#include "discrepancy/sketch.hpp"

namespace discrepancy {

namespace {

double rank_threshold(double trace) { return 1e-10 * std::max(trace, 0.0); }

std::size_t count_above(const std::vector<double>& values, double thr) {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double v) { return v > thr; }));
}

// Last column of Q in the Householder QR of the p x m matrix `a` (p > m,
// column-major). That column is orthogonal to range(a).
std::vector<double> null_vector_of_transpose(std::vector<double> a, std::size_t p, std::size_t m) {
  std::vector<std::vector<double>> reflectors;
  reflectors.reserve(m);
  for (std::size_t j = 0; j < m && j < p; ++j) {
    double* col = a.data() + j * p;
    double norm = 0.0;
    for (std::size_t i = j; i < p; ++i) norm += col[i] * col[i];
    norm = std::sqrt(norm);
    std::vector<double> v(p, 0.0);
    if (norm == 0.0) {
      reflectors.push_back(std::move(v));
      continue;
    }
    const double alpha = col[j] > 0.0 ? -norm : norm;
    for (std::size_t i = j; i < p; ++i) v[i] = col[i];
    v[j] -= alpha;
    double vn = 0.0;
    for (std::size_t i = j; i < p; ++i) vn += v[i] * v[i];
    vn = std::sqrt(vn);
    for (std::size_t i = j; i < p; ++i) v[i] /= vn;
    // apply H = I - 2 v vᵀ to the remaining columns
    for (std::size_t c = j; c < m; ++c) {
      double* cc = a.data() + c * p;
      double s = 0.0;
      for (std::size_t i = j; i < p; ++i) s += v[i] * cc[i];
      for (std::size_t i = j; i < p; ++i) cc[i] -= 2.0 * s * v[i];
    }
    reflectors.push_back(std::move(v));
  }
  std::vector<double> z(p, 0.0);
  z[p - 1] = 1.0;
  for (std::size_t j = reflectors.size(); j-- > 0;) {
    const auto& v = reflectors[j];
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i) s += v[i] * z[i];
    for (std::size_t i = 0; i < p; ++i) z[i] -= 2.0 * s * v[i];
  }
  return z;
}

double max_violation(std::span<const Constraint> cs, const SymMatrix& Y) {
  double worst = 0.0;
  for (const auto& c : cs) worst = std::max(worst, std::abs(inner(c.A, Y) - c.b));
  return worst;
}

// <A ⊗ I_t, v vᵀ> without forming the Kronecker product.
double lifted_form(const SymMatrix& A, std::span<const double> v, std::size_t t) {
  const std::size_t d = A.dim();
  std::vector<double> gram(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) gram[i * d + j] = kernels::dot(v.subspan(i * t, t), v.subspan(j * t, t));
  double s = 0.0;
  for (std::size_t k = 0; k < d * d; ++k) s += A.data()[k] * gram[k];
  return s;
}

}  // namespace

DensityMatrix::DensityMatrix(SymMatrix m) : m_(std::move(m)) {
  if (m_.dim() == 0) throw InvalidMatrix("density matrix has dimension zero");
  spec_ = eig_sym(m_);
  if (spec_.values.back() < -1e-9) throw InvalidMatrix("density matrix is not positive semidefinite");
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > 1e-9) throw InvalidMatrix("density matrix trace is " + std::to_string(tr));
  rank_ = count_above(spec_.values, rank_threshold(tr));
}

PureState::PureState(std::vector<double> v) : v_(std::move(v)) {
  if (v_.empty()) throw InvalidMatrix("pure state has dimension zero");
  const double n = norm2(v_);
  if (!(std::abs(n - 1.0) <= 1e-10)) throw InvalidMatrix("pure state is not a unit vector");
}

std::size_t numerical_rank(const SymMatrix& Y) {
  return count_above(eigvals_sym(Y), rank_threshold(Y.trace()));
}

PureState purify(const DensityMatrix& Y) {
  const std::size_t t = Y.rank();
  if (t == 0) throw DegenerateState("purify: density matrix has rank zero");
  const std::size_t d = Y.dim();
  const Spectrum& sp = Y.spectrum();
  std::vector<double> out(d * t, 0.0);
  for (std::size_t k = 0; k < t; ++k) {
    const double w = std::sqrt(sp.values[k]);
    const auto u = sp.vector(k);
    for (std::size_t i = 0; i < d; ++i) out[i * t + k] = w * u[i];
  }
  const double n = norm2(out);
  for (double& v : out) v /= n;
  return PureState(std::move(out));
}

RankReduceResult rank_reduce(std::span<const Constraint> constraints, const SymMatrix& Y0,
                             const RankReduceOptions& opts) {
  const std::size_t d = Y0.dim();
  const std::size_t m = constraints.size();
  for (const auto& c : constraints)
    if (c.A.dim() != d) throw ShapeError("rank_reduce: constraint dimension differs from Y0");
  const double v0 = max_violation(constraints, Y0);
  if (v0 > 1e-8) throw InfeasibleInput("rank_reduce: Y0 violates a constraint by " + std::to_string(v0));
  const double lmin0 = min_eigenvalue(Y0);
  if (lmin0 < -1e-9) throw InfeasibleInput("rank_reduce: Y0 is not positive semidefinite");

  RankReduceResult res;
  res.sqrt_bound = static_cast<std::size_t>(std::floor(4.0 * std::sqrt(static_cast<double>(m)) + 1e-12));
  res.pataki_bound =
      static_cast<std::size_t>(std::floor((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0 + 1e-12));
  auto done = [&](std::size_t rho) {
    if (opts.stop_at_sqrt_bound) return rho <= res.sqrt_bound;
    return rho * (rho + 1) / 2 <= m;
  };

  const double thr = rank_threshold(Y0.trace());
  SymMatrix Y = Y0;
  Spectrum sp = eig_sym(Y);
  std::size_t rho = count_above(sp.values, thr);
  res.initial_rank = rho;

  while (!done(rho) && res.steps < opts.max_steps) {
    // Y = V Vᵀ with V = [√λ_k q_k], d x ρ
    std::vector<double> V(d * rho);
    for (std::size_t k = 0; k < rho; ++k) {
      const double w = std::sqrt(sp.values[k]);
      const auto q = sp.vector(k);
      for (std::size_t i = 0; i < d; ++i) V[i * rho + k] = w * q[i];
    }
    const Matrix Vm(d, rho, V);
    const Matrix Vt = Vm.transpose();
    const std::size_t p = rho * (rho + 1) / 2;
    // Kᵀ in column-major: column i holds the coefficients of <Vᵀ A_i V, Λ>
    std::vector<double> kt(p * m);
    for (std::size_t i = 0; i < m; ++i) {
      const Matrix r = multiply(Vt, multiply(constraints[i].A.to_matrix(), Vm));
      std::size_t idx = 0;
      for (std::size_t a = 0; a < rho; ++a)
        for (std::size_t b = a; b < rho; ++b) kt[i * p + idx++] = (a == b ? 1.0 : 2.0) * r(a, b);
    }
    const auto z = null_vector_of_transpose(std::move(kt), p, m);
    std::vector<double> lam(rho * rho);
    {
      std::size_t idx = 0;
      for (std::size_t a = 0; a < rho; ++a)
        for (std::size_t b = a; b < rho; ++b) {
          lam[a * rho + b] = z[idx];
          lam[b * rho + a] = z[idx];
          ++idx;
        }
    }
    SymMatrix L(rho, lam);
    auto ev = eigvals_sym(L);
    double mu = ev.front();
    if (std::abs(ev.back()) > mu) {
      L = -L;
      mu = -ev.back();
    }
    if (!(mu > 1e-14)) {
      res.stalled = true;
      break;
    }
    // W = I − Λ/μ ⪰ 0 with a zero eigenvalue
    const SymMatrix W = SymMatrix::identity(rho) - (1.0 / mu) * L;
    const Matrix next = multiply(Vm, multiply(W.to_matrix(), Vt));
    SymMatrix candidate(next);
    // clean: keep the part above the rank threshold
    const Spectrum cs = eig_sym(candidate);
    const std::size_t r2 = count_above(cs.values, thr);
    if (r2 >= rho) {
      res.stalled = true;
      break;
    }
    Y = spectral_apply(cs, [&](double v) { return v > thr ? v : 0.0; });
    sp = eig_sym(Y);
    rho = count_above(sp.values, thr);
    ++res.steps;
  }

  res.Y = res.steps == 0 ? Y0 : Y;
  res.rank = res.steps == 0 ? res.initial_rank : rho;
  res.tight_achieved = res.rank <= res.pataki_bound;
  res.max_violation = max_violation(constraints, res.Y);
  res.min_eigenvalue = min_eigenvalue(res.Y);
  return res;
}

PtsReport purify_then_sketch(std::span<const DensityMatrix> Y_list, const MatrixFamily& family, std::size_t r,
                             double delta, std::uint64_t seed, const PtsOptions& opts) {
  if (Y_list.empty()) throw ConfigError("purify_then_sketch: no density matrices");
  if (r == 0) throw ConfigError("purify_then_sketch: r must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("purify_then_sketch: δ must lie in [0, 1)");
  if (!(opts.C > 1.0)) throw ConfigError("purify_then_sketch: C must exceed 1");
  const MatrixFamily f = require_traceless(family, opts.recentre);
  const std::size_t n = f.size();
  const std::size_t d = f.dim();
  for (const auto& Y : Y_list)
    if (Y.dim() != d) throw ShapeError("purify_then_sketch: density matrix dimension differs from family");

  const double rr = static_cast<double>(r);
  const double scale = rr / (rr + 1.0);
  const double nn = static_cast<double>(n);
  const double a_norm = f.sum_sq_norm();
  const double a_tr = f.sum_sq_trace();
  const double min_sqrt_n_d = std::min(std::sqrt(nn), static_cast<double>(d));

  PtsReport rep;
  rep.entries.resize(Y_list.size());
  parallel_for(Y_list.size(), opts.jobs, [&](std::size_t j) {
    const DensityMatrix& Y = Y_list[j];
    const PureState yp = purify(Y);
    const std::size_t t = Y.rank();
    const std::size_t D = d * t;
    Matrix S;
    if (opts.identity_sketch) {
      if (r != D) throw ConfigError("identity sketch requires r = d t");
      S = Matrix::identity(D);
    } else {
      S = draw_sketch(r, D, derive_seed(seed, j)).S;
    }
    const auto yv = yp.vector();
    std::vector<double> u(r);
    for (std::size_t i = 0; i < r; ++i) u[i] = kernels::dot(S.row(i), yv);
    std::vector<double> v(D, 0.0);  // Sᵀ u
    for (std::size_t i = 0; i < r; ++i) kernels::axpy(u[i], S.row(i), v);

    PtsEntry e;
    e.norm_sq = dot(u, u);
    e.c_g = e.norm_sq > 0.0 ? 1.0 / e.norm_sq : 0.0;
    e.t = t;
    e.tol = opts.C * std::sqrt(a_norm / (nn * rr) + static_cast<double>(t) * a_tr / (nn * rr * rr));
    e.forms.resize(n);
    e.targets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      e.forms[i] = scale * lifted_form(f[i], v, t);
      e.targets[i] = inner(Y.matrix(), f[i]);
      if (std::abs(e.forms[i] - e.targets[i]) <= e.tol) ++e.good_indices;
    }
    const bool window = e.norm_sq >= 1.0 / opts.C && e.norm_sq <= opts.C;
    e.good = window && static_cast<double>(e.good_indices) >= (1.0 - delta) * nn - 1e-9;
    if (e.norm_sq > 0.0) {
      std::vector<double> un(u);
      const double nu = std::sqrt(e.norm_sq);
      for (double& x : un) x /= nu;
      e.y = PureState(std::move(un));
    }
    if (opts.keep_matrices) {
      std::vector<double> acc(r * r, 0.0);
      e.B.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        e.B.push_back(scale * congruence(S, kron_identity(f[i], t)));
        kernels::axpy(1.0, square(e.B.back()).data(), acc);
      }
      e.sum_sq_norm = spectral_norm(SymMatrix(r, std::move(acc)));
      e.sum_sq_bound = opts.C_norm * (a_norm + min_sqrt_n_d * a_tr / rr);
    }
    rep.entries[j] = std::move(e);
  });
  std::size_t good = 0;
  for (const auto& e : rep.entries) good += e.good ? 1 : 0;
  rep.good_fraction = static_cast<double>(good) / static_cast<double>(rep.entries.size());
  return rep;
}

DensityMatrix random_density_matrix(std::size_t d, std::size_t rank, std::uint64_t seed) {
  if (d == 0 || rank == 0 || rank > d) throw ConfigError("random_density_matrix needs 1 <= rank <= d");
  Rng rng(seed);
  Matrix G(d, rank, rng.normal_vector(d * rank));
  SymMatrix Y(multiply_nt(G, G));
  return DensityMatrix((1.0 / Y.trace()) * Y);
}

Spectahedron random_spectahedron(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d == 0 || m == 0) throw ConfigError("random_spectahedron needs d >= 1 and m >= 1");
  Spectahedron sp;
  sp.Y0 = random_density_matrix(d, d, derive_seed(seed, 0)).matrix();
  sp.constraints.push_back({SymMatrix::identity(d), 1.0});
  for (std::size_t k = 1; k < m; ++k) {
    Rng rng(derive_seed(seed, k));
    Matrix G(d, d, rng.normal_vector(d * d));
    SymMatrix A(0.5 * (G + G.transpose()));
    const double b = inner(A, sp.Y0);
    sp.constraints.push_back({std::move(A), b});
  }
  return sp;
}

}  // namespace discrepancy
