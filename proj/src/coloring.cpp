#include "discrepancy/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "discrepancy/kernels.hpp"
#include "discrepancy/parallel.hpp"
#include "discrepancy/rng.hpp"

namespace discrepancy {

void SolveParams::validate() const {
  if (!(C_delta > 0.0)) throw ConfigError("C_delta must be positive");
  if (!(eps_frac > 0.0 && eps_frac < 1.0)) throw ConfigError("eps_frac must lie in (0, 1)");
  if (!(int_tol > 0.0 && int_tol < 1.0)) throw ConfigError("int_tol must lie in (0, 1)");
  if (!(feas_tol > 0.0)) throw ConfigError("feas_tol must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and non-negative");
  if (!(stall_tol > 0.0)) throw ConfigError("stall_tol must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be finite and non-negative");
  if (max_iters == 0) throw ConfigError("max_iters must be positive");
}

std::size_t Coloring::integral_count() const {
  return static_cast<std::size_t>(std::count(integral_mask.begin(), integral_mask.end(), true));
}

double Coloring::integral_fraction() const {
  return x.empty() ? 0.0 : static_cast<double>(integral_count()) / static_cast<double>(x.size());
}

Coloring make_coloring(const MatrixFamily& family, std::vector<double> x, double delta_used, double int_tol) {
  if (x.size() != family.size()) throw ShapeError("coloring length differs from family size");
  Coloring c;
  c.integral_mask.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw InvalidMatrix("coloring has a non-finite coordinate");
    x[i] = std::clamp(x[i], -1.0, 1.0);
    c.integral_mask[i] = std::abs(x[i]) >= 1.0 - int_tol;
  }
  c.discrepancy = evaluate_discrepancy(family, x);
  c.x = std::move(x);
  c.delta_used = delta_used;
  return c;
}

void validate_coloring(const MatrixFamily& family, const Coloring& c, double int_tol, double rel_slack) {
  if (c.x.size() != family.size() || c.integral_mask.size() != family.size()) {
    throw ShapeError("coloring length differs from family size");
  }
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    if (!(std::abs(c.x[i]) <= 1.0 + 1e-12)) throw InfeasibleInput("coloring leaves the box at " + std::to_string(i));
    if (c.integral_mask[i] != (std::abs(c.x[i]) >= 1.0 - int_tol)) {
      throw InfeasibleInput("integrality mask inconsistent at " + std::to_string(i));
    }
  }
  const double disc = evaluate_discrepancy(family, c.x);
  if (std::abs(disc - c.discrepancy) > 1e-8 * std::max(1.0, disc)) {
    throw InfeasibleInput("reported discrepancy does not match recomputation");
  }
  if (disc > (1.0 + rel_slack) * c.delta_used + 1e-12) throw InfeasibleInput("coloring exceeds its Δ");
}

double evaluate_discrepancy(const MatrixFamily& family, std::span<const double> x) {
  return spectral_norm(family.combine(x));
}

double delta_target(const MatrixFamily& family, double C) {
  if (!(C > 0.0)) throw ConfigError("delta_target: C must be positive");
  const double a = family.sum_sq_norm();
  if (!(a > 0.0)) throw DegenerateFamily("delta_target: Σ A_i² vanishes");
  const double n = static_cast<double>(family.size());
  const double arg = family.sum_sq_trace() / (std::sqrt(n) * a);
  return C * std::sqrt(a) * std::sqrt(1.0 + std::max(0.0, std::log(arg)));
}

namespace {

// φ_β(M) = (1/β) log(Tr e^{βM} + Tr e^{-βM}), evaluated with a shift by ‖M‖.
struct Smoothed {
  double phi = 0.0;
  double norm = 0.0;
};

class SmoothNorm {
 public:
  SmoothNorm(const MatrixFamily& family, double beta) : family_(family), beta_(beta) {}

  Smoothed value(std::span<const double> x) const {
    const auto ev = eigvals_sym(family_.combine(x));
    const double s = std::max(std::abs(ev.front()), std::abs(ev.back()));
    double z = 0.0;
    for (double l : ev) z += std::exp(beta_ * (l - s)) + std::exp(beta_ * (-l - s));
    return {s + std::log(z) / beta_, s};
  }

  // ∂φ/∂x_i = <W, A_i>, W = Σ_k c_k q_k q_kᵀ
  Smoothed gradient(std::span<const double> x, std::vector<double>& grad) const {
    const Spectrum sp = eig_sym(family_.combine(x));
    const double s = std::max(std::abs(sp.values.front()), std::abs(sp.values.back()));
    double z = 0.0;
    for (double l : sp.values) z += std::exp(beta_ * (l - s)) + std::exp(beta_ * (-l - s));
    const double b = beta_;
    const SymMatrix w =
        spectral_apply(sp, [&](double l) { return (std::exp(b * (l - s)) - std::exp(b * (-l - s))) / z; });
    grad.resize(family_.size());
    for (std::size_t i = 0; i < family_.size(); ++i) grad[i] = inner(w, family_[i]);
    return {s + std::log(z) / beta_, s};
  }

 private:
  const MatrixFamily& family_;
  double beta_;
};

double project(double v) { return std::clamp(v, -1.0, 1.0); }

double dotv(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Augmented Lagrangian on the smoothed constraint; inner problems by FISTA
// with backtracking and function-value restart.
class AlSolver {
 public:
  AlSolver(const MatrixFamily& family, std::span<const double> g, double delta, double beta,
           const SolveParams& params)
      : sm_(family, beta), g_(g.begin(), g.end()), delta_(delta), params_(params), n_(family.size()) {}

  struct Out {
    std::vector<double> x;
    bool converged = false;
    std::size_t iterations = 0;
    std::optional<std::vector<double>> best_feasible;
  };

  Out run(std::vector<double> x) {
    Out out;
    lambda_ = 0.0;
    mu_ = 10.0 / delta_;
    double step = 1e-2 * delta_;
    double prev_viol = std::numeric_limits<double>::infinity();
    double best_obj = -std::numeric_limits<double>::infinity();
    const std::size_t inner_cap = std::max<std::size_t>(100, params_.max_iters / 8);

    for (int outer = 0; outer < 60 && out.iterations < params_.max_iters; ++outer) {
      double gm = 0.0;
      std::vector<double> y = x, xprev = x, grad, xn(n_);
      double tk = 1.0;
      double fx = eval(x).f;
      for (std::size_t it = 0; it < inner_cap && out.iterations < params_.max_iters; ++it, ++out.iterations) {
        const Eval ey = eval_grad(y, grad);
        Eval en;
        for (int bt = 0; bt < 60; ++bt) {
          for (std::size_t i = 0; i < n_; ++i) xn[i] = project(y[i] - step * grad[i]);
          en = eval(xn);
          double lin = 0.0, sq = 0.0;
          for (std::size_t i = 0; i < n_; ++i) {
            const double dlt = xn[i] - y[i];
            lin += grad[i] * dlt;
            sq += dlt * dlt;
          }
          if (en.f <= ey.f + lin + sq / (2.0 * step) + 1e-14 * std::abs(ey.f)) break;
          step *= 0.5;
        }
        gm = 0.0;
        for (std::size_t i = 0; i < n_; ++i) gm = std::max(gm, std::abs(xn[i] - y[i]));
        gm /= step;

        if (en.phi <= delta_) {
          const double obj = dotv(g_, xn);
          if (obj > best_obj) {
            best_obj = obj;
            out.best_feasible = xn;
          }
        }

        if (en.f > fx) {
          // restart momentum
          tk = 1.0;
          y = x;
          step *= 0.7;
          continue;
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        const double mom = (tk - 1.0) / tn;
        xprev.swap(x);
        x = xn;
        for (std::size_t i = 0; i < n_; ++i) y[i] = project(x[i] + mom * (x[i] - xprev[i]));
        tk = tn;
        fx = en.f;
        step *= 1.1;
        if (gm <= 0.1 * params_.stall_tol) break;
      }

      const Smoothed s = sm_.value(x);
      const double viol = std::max(0.0, s.phi - delta_);
      const double lambda_new = std::max(0.0, lambda_ + mu_ * (s.phi - delta_));
      const bool settled = std::abs(lambda_new - lambda_) <= 1e-6 * std::max(1.0, lambda_);
      lambda_ = lambda_new;
      if (viol <= params_.feas_tol * delta_ && gm <= params_.stall_tol && settled) {
        out.converged = true;
        break;
      }
      if (viol > 0.25 * prev_viol) mu_ *= 10.0;
      prev_viol = viol;
    }
    out.x = std::move(x);
    return out;
  }

 private:
  struct Eval {
    double f = 0.0;
    double phi = 0.0;
  };

  double penalty(double phi) const {
    const double t = std::max(0.0, lambda_ + mu_ * (phi - delta_));
    return (t * t - lambda_ * lambda_) / (2.0 * mu_);
  }

  Eval eval(std::span<const double> x) const {
    const Smoothed s = sm_.value(x);
    return {-dotv(g_, x) + penalty(s.phi), s.phi};
  }

  Eval eval_grad(std::span<const double> x, std::vector<double>& grad) const {
    const Smoothed s = sm_.gradient(x, grad);
    const double w = std::max(0.0, lambda_ + mu_ * (s.phi - delta_));
    for (std::size_t i = 0; i < n_; ++i) grad[i] = -g_[i] + w * grad[i];
    return {-dotv(g_, x) + penalty(s.phi), s.phi};
  }

  SmoothNorm sm_;
  std::vector<double> g_;
  double delta_;
  const SolveParams& params_;
  std::size_t n_;
  double lambda_ = 0.0;
  double mu_ = 1.0;
};

// Largest scalar move x -> clamp(t x) that stays feasible. Shrinks when x is
// infeasible; otherwise grows towards the box while <g, x> improves.
std::vector<double> scalar_polish(const MatrixFamily& family, std::span<const double> g, std::vector<double> x,
                                  double delta) {
  const double h1 = evaluate_discrepancy(family, x);
  if (h1 > delta) {
    const double t = delta / h1;
    for (double& v : x) v *= t;
    // guard against the last ulp
    while (evaluate_discrepancy(family, x) > delta) {
      for (double& v : x) v *= (1.0 - 1e-15);
    }
    return x;
  }
  double amin = std::numeric_limits<double>::infinity();
  for (double v : x)
    if (v != 0.0 && std::abs(v) < 1.0) amin = std::min(amin, std::abs(v));
  if (!std::isfinite(amin)) return x;
  auto at = [&](double t) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = project(t * x[i]);
    return y;
  };
  double lo = 1.0, hi = 1.0 / amin;
  if (evaluate_discrepancy(family, at(hi)) <= delta) {
    lo = hi;
  } else {
    for (int k = 0; k < 50 && hi - lo > 1e-13 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (evaluate_discrepancy(family, at(mid)) <= delta)
        lo = mid;
      else
        hi = mid;
    }
  }
  auto y = at(lo);
  return dotv(g, y) >= dotv(g, x) ? y : x;
}

std::vector<double> random_signs(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  return rng.rademacher_vector(n);
}

std::size_t required_integral(double eps, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(n) - 1e-9));
  return std::max<std::size_t>(1, k);
}

// Clamp the near-integral coordinates and re-establish feasibility by
// shrinking the fractional ones. nullopt if no shrink works.
std::optional<Coloring> round_integral(const MatrixFamily& family, const Coloring& c, double delta,
                                       const SolveParams& p) {
  std::vector<double> x = c.x;
  std::vector<std::size_t> frac;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (c.integral_mask[i])
      x[i] = x[i] > 0.0 ? 1.0 : -1.0;
    else
      frac.push_back(i);
  }
  const double limit = (1.0 + 10.0 * p.feas_tol) * delta;
  if (evaluate_discrepancy(family, x) > limit) {
    auto scaled = [&](double t) {
      std::vector<double> y = x;
      for (std::size_t i : frac) y[i] *= t;
      return y;
    };
    if (frac.empty() || evaluate_discrepancy(family, scaled(0.0)) > limit) return std::nullopt;
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (evaluate_discrepancy(family, scaled(mid)) <= limit)
        lo = mid;
      else
        hi = mid;
    }
    x = scaled(lo);
  }
  Coloring out = make_coloring(family, std::move(x), delta, p.int_tol);
  out.converged = c.converged;
  out.iterations = c.iterations;
  return out;
}

SymMatrix zero_like(const MatrixFamily& family) { return SymMatrix(family.dim()); }

}  // namespace

Coloring solve_partial_program(const MatrixFamily& family, std::span<const double> g, double delta,
                               const SolveParams& params) {
  params.validate();
  const std::size_t n = family.size();
  if (g.size() != n) throw ShapeError("solve_partial_program: g has the wrong length");
  for (double v : g)
    if (v != 1.0 && v != -1.0) throw ConfigError("solve_partial_program: g must be a sign vector");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("solve_partial_program: Δ must be positive");

  std::vector<double> gv(g.begin(), g.end());
  const double ng = evaluate_discrepancy(family, gv);
  if (ng <= delta) return make_coloring(family, std::move(gv), delta, params.int_tol);

  const double beta =
      params.beta > 0.0 ? params.beta : std::log(4.0 * static_cast<double>(family.dim())) / (0.01 * delta);
  std::vector<double> x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = g[i] * (delta / ng);

  AlSolver solver(family, g, delta, beta, params);
  auto out = solver.run(std::move(x0));
  std::vector<double> cand = scalar_polish(family, g, std::move(out.x), delta);
  if (out.best_feasible) {
    auto alt = scalar_polish(family, g, std::move(*out.best_feasible), delta);
    if (dotv(g, alt) > dotv(g, cand)) cand = std::move(alt);
  }
  Coloring c = make_coloring(family, std::move(cand), delta, params.int_tol);
  c.converged = out.converged;
  c.iterations = out.iterations;
  return c;
}

PartialResult partial_coloring(const MatrixFamily& family, const SolveParams& params) {
  params.validate();
  const std::size_t n = family.size();
  if (!(family.sum_sq_norm() > 0.0)) {
    // nothing to balance: any signing has discrepancy 0
    auto g = random_signs(derive_seed(params.seed, 0), n);
    Coloring c = make_coloring(family, g, 0.0, params.int_tol);
    return {std::move(c), std::move(g), 1};
  }
  const double delta = params.delta > 0.0 ? params.delta : delta_target(family, params.C_delta);
  const std::size_t need = required_integral(params.eps_frac, n);
  const std::size_t budget = params.max_retries > 0 ? params.max_retries : 10 * n;

  struct Attempt {
    std::vector<double> g;
    Coloring raw;
    std::optional<Coloring> rounded;
  };
  std::vector<std::optional<Attempt>> attempts(budget);

  const auto winner = parallel_first(budget, params.jobs, [&](std::size_t k) {
    auto g = random_signs(derive_seed(params.seed, k), n);
    Coloring raw = solve_partial_program(family, g, delta, params);
    std::optional<Coloring> rounded;
    if (raw.integral_count() >= need) rounded = round_integral(family, raw, delta, params);
    const bool ok = rounded && rounded->integral_count() >= need;
    attempts[k] = Attempt{std::move(g), std::move(raw), std::move(rounded)};
    return ok;
  });

  if (winner) {
    Attempt& a = *attempts[*winner];
    return {std::move(*a.rounded), std::move(a.g), *winner + 1};
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < budget; ++k) {
    if (attempts[k] && attempts[k]->raw.integral_count() > attempts[best]->raw.integral_count()) best = k;
  }
  throw RetriesExhausted("partial coloring: no attempt reached " + std::to_string(need) + " integral coordinates in " +
                             std::to_string(budget) + " retries",
                         attempts[best]->raw, budget);
}

ExhaustiveResult exhaustive_signs(const MatrixFamily& family, std::span<const std::size_t> idx, const SymMatrix* base) {
  const std::size_t k = idx.size();
  if (k > 24) throw SizeError("exhaustive search over more than 24 signs");
  const std::size_t d = family.dim();
  std::vector<double> acc(d * d, 0.0);
  if (base) {
    if (base->dim() != d) throw ShapeError("exhaustive_signs: base has the wrong dimension");
    std::copy(base->data().begin(), base->data().end(), acc.begin());
  }
  std::vector<double> s(k, 1.0);
  for (std::size_t j = 0; j < k; ++j) kernels::axpy(1.0, family[idx[j]].data(), acc);

  auto norm_of = [&](const std::vector<double>& a) { return spectral_norm(SymMatrix(d, a)); };
  ExhaustiveResult best{norm_of(acc), s};
  if (k == 0) return best;
  // Without a base the problem is symmetric under s -> -s; keep the last sign fixed.
  const std::size_t free_bits = base ? k : k - 1;
  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto j = static_cast<std::size_t>(__builtin_ctzll(step));
    s[j] = -s[j];
    kernels::axpy(2.0 * s[j], family[idx[j]].data(), acc);
    const double v = norm_of(acc);
    if (v < best.value) best = {v, s};
  }
  // recompute without accumulated rounding
  SymMatrix exact = base ? *base : zero_like(family);
  std::vector<double> e(exact.data().begin(), exact.data().end());
  for (std::size_t j = 0; j < k; ++j) kernels::axpy(best.signs[j], family[idx[j]].data(), e);
  best.value = norm_of(e);
  return best;
}

ExhaustiveResult exhaustive_optimum(const MatrixFamily& family) {
  std::vector<std::size_t> idx(family.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return exhaustive_signs(family, idx, nullptr);
}

FullColoring full_coloring(const MatrixFamily& family, const SolveParams& params) {
  params.validate();
  const std::size_t n = family.size();
  FullColoring out;
  if (!(family.sum_sq_norm() > 0.0)) {
    out.coloring = make_coloring(family, random_signs(derive_seed(params.seed, 0), n), 0.0, params.int_tol);
    out.coloring.rounds.push_back({n, 0.0, 1});
    return out;
  }
  const double first_delta = delta_target(family, params.C_delta);
  std::vector<double> z(n, 0.0);
  std::vector<Round> rounds;
  auto sigma = [](double v) { return v >= 0.0 ? 1.0 : -1.0; };

  for (std::size_t r = 0;; ++r) {
    std::vector<std::size_t> surv;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(z[i]) < 1.0) surv.push_back(i);
    if (surv.empty()) break;

    if (surv.size() <= params.n_min) {
      out.pre_endgame_discrepancy = evaluate_discrepancy(family, z);
      std::vector<double> fixed = z;
      for (std::size_t i : surv) fixed[i] = 0.0;
      const SymMatrix base = family.combine(fixed);
      const auto ex = exhaustive_signs(family, surv, &base);
      for (std::size_t j = 0; j < surv.size(); ++j) z[surv[j]] = ex.signs[j];
      out.endgame_size = surv.size();
      break;
    }

    std::vector<SymMatrix> sub;
    sub.reserve(surv.size());
    for (std::size_t i : surv) sub.push_back((sigma(z[i]) * (1.0 - std::abs(z[i]))) * family[i]);
    const MatrixFamily subfam(std::move(sub), family.meta());
    if (!(subfam.sum_sq_norm() > 0.0)) {
      for (std::size_t i : surv) z[i] = sigma(z[i]);
      rounds.push_back({surv.size(), 0.0, 0});
      continue;
    }

    SolveParams p = params;
    p.seed = derive_seed(params.seed, r);
    p.delta = 0.0;
    PartialResult pr;
    try {
      pr = partial_coloring(subfam, p);
    } catch (const RetriesExhausted& e) {
      throw FullColoringFailed(std::string("full coloring: round ") + std::to_string(r) + ": " + e.what(), z, rounds);
    }
    const std::vector<double>& y = pr.coloring.x;
    // y and -y are equally good for the sub-program; keep the orientation that
    // fixes more coordinates, which guarantees progress.
    std::vector<double> zp = z, zm = z;
    std::size_t cp = 0, cm = 0;
    for (std::size_t j = 0; j < surv.size(); ++j) {
      const std::size_t i = surv[j];
      const double w = sigma(z[i]) * (1.0 - std::abs(z[i]));
      zp[i] = std::clamp(z[i] + w * y[j], -1.0, 1.0);
      zm[i] = std::clamp(z[i] - w * y[j], -1.0, 1.0);
      if (std::abs(zp[i]) >= 1.0 - params.int_tol) ++cp;
      if (std::abs(zm[i]) >= 1.0 - params.int_tol) ++cm;
    }
    z = cm > cp ? std::move(zm) : std::move(zp);
    for (std::size_t i : surv)
      if (std::abs(z[i]) >= 1.0 - params.int_tol) z[i] = sigma(z[i]);
    rounds.push_back({surv.size(), pr.coloring.delta_used, pr.retries});
    out.delta_sum += pr.coloring.delta_used;
  }

  if (out.endgame_size == 0) out.pre_endgame_discrepancy = evaluate_discrepancy(family, z);
  out.coloring = make_coloring(family, std::move(z), first_delta, params.int_tol);
  out.coloring.rounds = std::move(rounds);
  return out;
}

DualWitness extract_dual_witness(const MatrixFamily& family, const Coloring& x, double delta, double beta,
                                 std::span<const double> g) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("extract_dual_witness: beta must be positive");
  if (x.x.size() != family.size()) throw ShapeError("extract_dual_witness: coloring length differs");
  if (!g.empty() && g.size() != family.size()) throw ShapeError("extract_dual_witness: g has the wrong length");
  const SymMatrix m = family.combine(x.x);
  const Spectrum sp = eig_sym(m);
  const double s = std::max(std::abs(sp.values.front()), std::abs(sp.values.back()));
  if (delta > 0.0 && s > (1.0 + 1e-6) * delta) throw InfeasibleInput("extract_dual_witness: x violates Δ");

  DualWitness w;
  if (s == 0.0) {
    w.Y = SymMatrix(family.dim());
  } else {
    // sinh(β|λ|) weights, shifted by e^{-βs}; the cosh part of the partition
    // function only rescales, and the result is normalised anyway.
    double total = 0.0;
    std::vector<double> wt(sp.values.size());
    for (std::size_t k = 0; k < wt.size(); ++k) {
      const double a = std::abs(sp.values[k]);
      wt[k] = std::exp(beta * (a - s)) - std::exp(beta * (-a - s));
      total += wt[k];
    }
    std::vector<double> signed_wt(wt.size());
    for (std::size_t k = 0; k < wt.size(); ++k) signed_wt[k] = (sp.values[k] < 0.0 ? -wt[k] : wt[k]) / total;
    Spectrum scaled{signed_wt, sp.vectors};
    w.Y = reconstruct(scaled);
  }
  w.per_index.resize(family.size());
  std::size_t agree = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    w.per_index[i] = inner(w.Y, family[i]);
    const double gi = g.empty() ? (x.x[i] >= 0.0 ? 1.0 : -1.0) : g[i];
    const double si = w.per_index[i] >= 0.0 ? 1.0 : -1.0;
    if (si == gi) ++agree;
  }
  w.alignment = static_cast<double>(agree) / static_cast<double>(family.size());
  return w;
}

std::string coloring_to_json(const Coloring& c) {
  std::string out = "{\"x\":[";
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    if (i) out += ',';
    out += format_double(c.x[i]);
  }
  out += "],\"integral_mask\":[";
  for (std::size_t i = 0; i < c.integral_mask.size(); ++i) {
    if (i) out += ',';
    out += c.integral_mask[i] ? "true" : "false";
  }
  out += "],\"discrepancy\":" + format_double(c.discrepancy) + ",\"delta_used\":" + format_double(c.delta_used) +
         ",\"rounds\":[";
  for (std::size_t r = 0; r < c.rounds.size(); ++r) {
    if (r) out += ',';
    out += "{\"n_remaining\":" + std::to_string(c.rounds[r].n_remaining) +
           ",\"delta\":" + format_double(c.rounds[r].delta) + ",\"retries\":" + std::to_string(c.rounds[r].retries) +
           "}";
  }
  out += "]}\n";
  return out;
}

}  // namespace discrepancy
