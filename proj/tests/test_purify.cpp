#include <doctest.h>

#include <cmath>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/purify.hpp"
#include "discrepancy/rng.hpp"
#include "oracles.hpp"

using namespace discrepancy;

namespace {

// (y')ᵀ (A ⊗ I_t) y' with an explicit Kronecker product
double lifted(const SymMatrix& A, const PureState& y, std::size_t t) {
  return quadratic_form(kron_identity(A, t), y.vector());
}

MatrixFamily gen(FamilyKind kind, std::size_t n, std::size_t d, std::uint64_t seed) {
  GenSpec s;
  s.kind = kind;
  s.n = n;
  s.d = d;
  return gen_family(s, seed);
}

}  // namespace

TEST_CASE("density matrix and pure state validation") {
  CHECK_THROWS_AS(DensityMatrix(SymMatrix::identity(2)), InvalidMatrix);
  CHECK_THROWS_AS(DensityMatrix(SymMatrix::diagonal(std::vector<double>{1.5, -0.5})), InvalidMatrix);
  CHECK(DensityMatrix(SymMatrix::diagonal(std::vector<double>{0.5, 0.5, 0.0})).rank() == 2);
  CHECK_THROWS_AS(PureState(std::vector<double>{1.0, 1.0}), InvalidMatrix);
  CHECK(PureState(std::vector<double>{0.6, 0.8}).dim() == 2);
}

TEST_CASE("purify pure state") {
  const std::vector<double> u{0.6, 0.0, -0.8};
  const DensityMatrix Y(SymMatrix::outer(u));
  const PureState y = purify(Y);
  REQUIRE(y.dim() == 3);
  // sign of an eigenvector is arbitrary
  const double s = y.vector()[0] > 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < 3; ++i) CHECK(s * y.vector()[i] == doctest::Approx(u[i]).epsilon(1e-12));
  const SymMatrix A = oracle::random_sym(3, 4);
  CHECK(lifted(A, y, 1) == doctest::Approx(quadratic_form(A, u)).epsilon(1e-12));
}

TEST_CASE("purify maximally mixed") {
  const std::size_t d = 5;
  const DensityMatrix Y((1.0 / d) * SymMatrix::identity(d));
  const PureState y = purify(Y);
  CHECK(y.dim() == d * d);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SymMatrix A = oracle::random_sym(d, 20 + s);
    CHECK(std::abs(lifted(A, y, d) - A.trace() / d) <= 1e-10);
  }
}

TEST_CASE("purify random rank-3 states preserves forms") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t d = 4 + s % 4;
    const DensityMatrix Y = random_density_matrix(d, 3, 100 + s);
    CHECK(Y.rank() == 3);
    const PureState y = purify(Y);
    CHECK(y.dim() == 3 * d);
    CHECK(std::abs(norm2(y.vector()) - 1.0) <= 1e-12);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const SymMatrix A = oracle::random_sym(d, 500 + 10 * s + k);
      CHECK(std::abs(lifted(A, y, 3) - inner(Y.matrix(), A)) <= 1e-10);
    }
  }
}

TEST_CASE("rank_reduce single trace constraint") {
  const std::size_t d = 6;
  const std::vector<Constraint> cs{{SymMatrix::identity(d), 1.0}};
  const auto res = rank_reduce(cs, (1.0 / d) * SymMatrix::identity(d));
  CHECK(res.initial_rank == d);
  CHECK(res.rank == 1);
  CHECK(numerical_rank(res.Y) == 1);
  CHECK(res.max_violation <= 1e-7);
  CHECK(res.min_eigenvalue >= -1e-8);
  CHECK(res.sqrt_bound == 4);
  CHECK(res.pataki_bound == 1);
  CHECK(res.tight_achieved);
}

TEST_CASE("rank_reduce leaves low-rank input unchanged") {
  const Spectahedron sp = random_spectahedron(8, 4, 3);
  const DensityMatrix low = random_density_matrix(8, 2, 9);
  std::vector<Constraint> cs;
  for (const auto& c : sp.constraints) cs.push_back({c.A, inner(c.A, low.matrix())});
  RankReduceOptions opts;
  opts.stop_at_sqrt_bound = true;
  const auto res = rank_reduce(cs, low.matrix(), opts);
  CHECK(res.steps == 0);
  CHECK(res.Y == low.matrix());
  CHECK(res.rank == 2);
}

TEST_CASE("rank_reduce random spectahedra") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t m = 1 + s % 6, d = 10;
    const Spectahedron sp = random_spectahedron(d, m, 40 + s);
    for (bool sqrt_stop : {false, true}) {
      RankReduceOptions opts;
      opts.stop_at_sqrt_bound = sqrt_stop;
      const auto res = rank_reduce(sp.constraints, sp.Y0, opts);
      INFO("m=" << m << " sqrt_stop=" << sqrt_stop);
      CHECK(res.rank <= res.sqrt_bound);
      CHECK(res.max_violation <= 1e-7);
      CHECK(res.min_eigenvalue >= -1e-8);
      CHECK(numerical_rank(res.Y) == res.rank);
      if (!sqrt_stop) {
        CHECK(res.rank * (res.rank + 1) / 2 <= m);
        CHECK(res.tight_achieved);
      }
    }
  }
  const Spectahedron sp = random_spectahedron(10, 4, 1);
  const auto res = rank_reduce(sp.constraints, sp.Y0);
  CHECK(res.rank <= 8);
}

TEST_CASE("rank_reduce rejects infeasible input") {
  const std::vector<Constraint> cs{{SymMatrix::identity(3), 2.0}};
  CHECK_THROWS_AS(rank_reduce(cs, (1.0 / 3) * SymMatrix::identity(3)), InfeasibleInput);
  const std::vector<Constraint> ok{{SymMatrix::identity(2), 0.0}};
  CHECK_THROWS_AS(rank_reduce(ok, SymMatrix::diagonal(std::vector<double>{1.0, -1.0})), InfeasibleInput);
  CHECK_THROWS_AS(rank_reduce(ok, SymMatrix::identity(3)), ShapeError);
}

TEST_CASE("purify_then_sketch identity hook") {
  const MatrixFamily f = gen(FamilyKind::GaussianUnit, 5, 4, 2).recentred();
  const DensityMatrix Y = random_density_matrix(4, 2, 5);
  const std::vector<DensityMatrix> ys{Y};
  PtsOptions opts;
  opts.identity_sketch = true;
  opts.keep_matrices = true;
  const std::size_t r = 8;
  const auto rep = purify_then_sketch(ys, f, r, 0.1, 0, opts);
  const auto& e = rep.entries.at(0);
  CHECK(e.t == 2);
  CHECK(e.norm_sq == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(e.targets[i] == doctest::Approx(inner(Y.matrix(), f[i])).epsilon(1e-12));
    CHECK(std::abs(e.forms[i] - (8.0 / 9.0) * e.targets[i]) <= 1e-10);
    CHECK(quadratic_form(e.B[i], e.y.vector()) == doctest::Approx(e.forms[i]).epsilon(1e-10));
  }
  opts.keep_matrices = false;
  CHECK_THROWS_AS(purify_then_sketch(ys, f, 7, 0.1, 0, opts), ConfigError);
}

TEST_CASE("purify_then_sketch argument checks") {
  const MatrixFamily f = gen(FamilyKind::GaussianUnit, 3, 3, 2);
  const std::vector<DensityMatrix> none;
  CHECK_THROWS_AS(purify_then_sketch(none, f.recentred(), 4, 0.1, 0), ConfigError);
  const std::vector<DensityMatrix> ys{random_density_matrix(3, 1, 1)};
  CHECK_THROWS_AS(purify_then_sketch(ys, f, 4, 0.1, 0), TraceError);
  PtsOptions rc;
  rc.recentre = true;
  CHECK_NOTHROW(purify_then_sketch(ys, f, 4, 0.1, 0, rc));
  const std::vector<DensityMatrix> wrong{random_density_matrix(2, 1, 1)};
  CHECK_THROWS_AS(purify_then_sketch(wrong, f.recentred(), 4, 0.1, 0), ShapeError);
}

TEST_CASE("purify_then_sketch single pure state") {
  const MatrixFamily f = gen(FamilyKind::GaussianUnit, 8, 8, 6).recentred();
  std::size_t good = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::vector<DensityMatrix> ys{random_density_matrix(8, 1, 300 + s)};
    PtsOptions opts;
    opts.keep_matrices = true;
    const auto rep = purify_then_sketch(ys, f, 64, 0.1, s, opts);
    const auto& e = rep.entries[0];
    CHECK(e.t == 1);
    CHECK(e.sum_sq_norm <= e.sum_sq_bound);
    good += e.good ? 1 : 0;
  }
  CHECK(good >= 15);
}

TEST_CASE("purify_then_sketch good fraction at suite scale") {
  const MatrixFamily f = gen(FamilyKind::GaussianUnit, 16, 16, 11).recentred();
  std::vector<DensityMatrix> ys;
  for (std::uint64_t k = 0; k < 40; ++k) ys.push_back(random_density_matrix(16, 1 + k % 4, 700 + k));
  for (std::size_t r : {64, 256}) {
    double frac = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) frac += purify_then_sketch(ys, f, r, 0.1, 900 + s).good_fraction;
    frac /= 5;
    INFO("r = " << r);
    CHECK(frac >= 0.75);
  }
  const auto a = purify_then_sketch(ys, f, 64, 0.1, 3, {});
  PtsOptions par;
  par.jobs = 4;
  const auto b = purify_then_sketch(ys, f, 64, 0.1, 3, par);
  for (std::size_t j = 0; j < ys.size(); ++j) CHECK(a.entries[j].forms == b.entries[j].forms);
}
