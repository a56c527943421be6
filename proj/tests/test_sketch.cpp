#include <doctest.h>

#include <cmath>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/sketch.hpp"
#include "oracles.hpp"

using namespace discrepancy;

namespace {

std::vector<double> unit(std::size_t D, std::size_t i) {
  std::vector<double> e(D, 0.0);
  e[i] = 1.0;
  return e;
}

SymMatrix diag(std::vector<double> v) { return SymMatrix::diagonal(v); }

MatrixFamily gen(FamilyKind kind, std::size_t n, std::size_t d, std::uint64_t seed) {
  GenSpec s;
  s.kind = kind;
  s.n = n;
  s.d = d;
  return gen_family(s, seed);
}

// Moments of u ~ N(0, I_r / r): E‖u‖^(2k) = r(r+2)...(r+2k-2) / r^k.
double chi_moment(std::size_t r, int k) {
  double num = 1.0;
  for (int j = 0; j < k; ++j) num *= static_cast<double>(r + 2 * j) / static_cast<double>(r);
  return num;
}

}  // namespace

TEST_CASE("draw_sketch") {
  const auto a = draw_sketch(5, 7, 42), b = draw_sketch(5, 7, 42), c = draw_sketch(5, 7, 43);
  CHECK(a.S == b.S);
  CHECK_FALSE(a.S == c.S);
  CHECK(a.S.rows() == 5);
  CHECK(a.S.cols() == 7);
  CHECK_THROWS_AS(draw_sketch(0, 3, 1), ConfigError);
  CHECK_THROWS_AS(draw_sketch(3, 0, 1), ConfigError);

  const std::size_t r = 1000, D = 10;
  const auto s = draw_sketch(r, D, 7);
  double sum = 0.0, sq = 0.0;
  for (double v : s.S.data()) {
    sum += v;
    sq += v * v;
  }
  const double N = static_cast<double>(r * D);
  // entry sd = 1/√r, so the mean has sd 1/√(rN)
  CHECK(std::abs(sum / N) <= 5.0 / std::sqrt(r * N));
  // entry² has mean 1/r and sd √2/r
  CHECK(std::abs(sq / N - 1.0 / r) <= 5.0 * std::sqrt(2.0) / r / std::sqrt(N));

  // ‖S e1‖² is χ²_r / r: mean 1, sd √(2/r)
  double col = 0.0;
  for (std::size_t i = 0; i < r; ++i) col += s.S(i, 0) * s.S(i, 0);
  CHECK(std::abs(col - 1.0) <= 5.0 * std::sqrt(2.0 / r));
}

TEST_CASE("sketch_quadratic_form") {
  const SymMatrix A = oracle::random_sym(4, 3);
  const std::vector<double> y{0.3, -1.0, 2.0, 0.5};
  CHECK(sketch_quadratic_form(Matrix::identity(4), y, A) == doctest::Approx(quadratic_form(A, y)).epsilon(1e-14));
  const auto S = draw_sketch(6, 4, 9);
  CHECK(sketch_quadratic_form(S, y, SymMatrix(4)) == 0.0);

  // explicit products: Sy, then S A Sᵀ
  const Matrix& M = S.S;
  std::vector<double> sy(6, 0.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 4; ++j) sy[i] += M(i, j) * y[j];
  std::vector<double> sas(36, 0.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q) sas[i * 6 + j] += M(i, p) * A(p, q) * M(j, q);
  double want = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) want += sy[i] * sas[i * 6 + j] * sy[j];
  CHECK(sketch_quadratic_form(S, y, A) == doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(sketch_quadratic_form(S, std::vector<double>(3, 1.0), A), ShapeError);
}

TEST_CASE("expected_quadratic_form closed form") {
  CHECK(expected_quadratic_form(unit(4, 0), diag({1, -1, 0, 0}), 4) == doctest::Approx(1.25));
  const std::size_t D = 6, r = 3;
  CHECK(expected_quadratic_form(unit(D, 2), SymMatrix::identity(D), r) ==
        doctest::Approx(1.0 + 1.0 / r + static_cast<double>(D) / r));
  CHECK_THROWS_AS(expected_quadratic_form(unit(2, 0), SymMatrix::identity(2), 0), ConfigError);
}

TEST_CASE("expected_quadratic_form matches Monte Carlo on 20 random cases") {
  for (std::uint64_t c = 0; c < 20; ++c) {
    const std::size_t D = 2 + c % 4, r = 1 + c % 7;
    const SymMatrix A = oracle::random_sym(D, 100 + c);
    auto y = oracle::gaussian(D, 200 + c);
    const auto mc = mc_quadratic_form(y, A, r, 200000, 300 + c);
    const double want = expected_quadratic_form(y, A, r);
    INFO("case " << c << " D=" << D << " r=" << r);
    CHECK(std::abs(mc.mean - want) <= 4.0 * mc.mean_se);
  }
}

TEST_CASE("mc_quadratic_form is thread-count independent") {
  const SymMatrix A = oracle::random_sym(3, 1);
  const std::vector<double> y{1, 2, 3};
  const auto a = mc_quadratic_form(y, A, 4, 500, 11, 1);
  const auto b = mc_quadratic_form(y, A, 4, 500, 11, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
}

TEST_CASE("traceless enforcement") {
  const MatrixFamily f(std::vector<SymMatrix>{SymMatrix::identity(3)});
  CHECK_THROWS_AS(require_traceless(f, false), TraceError);
  CHECK(require_traceless(f, true).max_abs_trace() <= 1e-12);
  CHECK_THROWS_AS(variance_upper_bound(f, 4, 50.0), TraceError);
  CHECK_THROWS_AS(sketched_family_spectral_norm(f, 4, 10, 1), TraceError);
  CHECK_THROWS_AS(decoupled_norm_compare(f, 4, 10, 1), TraceError);
  CHECK_THROWS_AS(empirical_variance(f, unit(3, 0), 4, 100, 1), TraceError);
}

TEST_CASE("variance bound and empirical variance") {
  const MatrixFamily zero = gen(FamilyKind::Zero, 3, 4, 0);
  CHECK(variance_upper_bound(zero, 8, 50.0) == 0.0);
  CHECK(empirical_variance(zero, unit(4, 0), 8, 200, 1).mean == 0.0);

  // A = diag(1,-1), y = e1: Q = ‖u‖⁴ - (u·v)² with u = S e1, v = S e2 independent.
  const std::size_t r = 8;
  const double rr = r;
  const double var_u4 = chi_moment(r, 4) - std::pow(chi_moment(r, 2), 2);
  const double var_uv2 = 3.0 * chi_moment(r, 2) / (rr * rr) - 1.0 / (rr * rr);
  const double cov = chi_moment(r, 3) / rr - chi_moment(r, 2) / rr;
  const double exact = var_u4 + var_uv2 - 2.0 * cov;
  const MatrixFamily one(std::vector<SymMatrix>{diag({1, -1})});
  const auto ev = empirical_variance(one, unit(2, 0), r, 200000, 5);
  CHECK(std::abs(ev.mean - exact) <= 4.0 * ev.mean_se);
  CHECK(ev.mean <= 50.0 * (1.0 / 8 + 2.0 / 64));
  CHECK(variance_upper_bound(one, r, 50.0) == doctest::Approx(50.0 * (1.0 / 8 + 2.0 / 64)));
}

TEST_CASE("variance scales between 1/r and 1/r²") {
  const MatrixFamily f = gen(FamilyKind::GaussianUnit, 4, 6, 3).recentred();
  const auto y = unit(6, 0);
  double ratio = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const double v1 = empirical_variance(f, y, 8, 4000, 10 + s).mean;
    const double v2 = empirical_variance(f, y, 16, 4000, 50 + s).mean;
    ratio += v1 / v2;
  }
  ratio /= 10;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("wick covariance oracle") {
  const std::size_t D = 4;
  const auto y = unit(D, 0), a = unit(D, 1), b = unit(D, 2);
  CHECK(wick_variance_oracle(std::vector<double>(D, 0.0), a, b, 4, 200, 1).mean == 0.0);

  // orthonormal y, a, b: Sy, Sa, Sb independent, Cov = E‖u‖⁴/r² - 1/r² = 2/r³
  for (std::size_t r : {4, 8}) {
    const auto w = wick_variance_oracle(y, a, b, r, 200000, 3 + r);
    const double want = 2.0 / (r * r * r);
    CHECK(std::abs(w.mean - want) <= 4.0 * w.mean_se);
    CHECK(w.mean <= 100.0 / r);
  }

  // a = b = y: Var ‖u‖⁴ = E‖u‖⁸ - (E‖u‖⁴)²
  for (std::size_t r : {4, 8, 16}) {
    const auto w = wick_variance_oracle(y, y, y, r, 100000, 20 + r);
    const double want = chi_moment(r, 4) - std::pow(chi_moment(r, 2), 2);
    INFO("r = " << r);
    CHECK(std::abs(w.mean - want) <= 4.0 * w.mean_se);
    CHECK(w.mean * r >= 8.0);
    CHECK(w.mean * r <= 30.0);
    CHECK(w.mean <= 100.0 / r);
  }
}

TEST_CASE("sketched family spectral norm") {
  CHECK(sketched_family_spectral_norm(gen(FamilyKind::Zero, 2, 5, 0), 4, 20, 1).mean == 0.0);

  const MatrixFamily mr = gen(FamilyKind::ModerateRank, 16, 16, 4).recentred();
  const auto s = sketched_family_spectral_norm(mr, 16, 300, 8);
  CHECK(s.mean <= 50.0 * (mr.sum_sq_norm() + mr.sum_sq_trace() / 16.0));
  CHECK(s.mean > 0.0);

  // one traceless ±1 diagonal in D = 64: ‖Σ A²‖ = 1, Tr Σ A² = 64
  std::vector<double> pm(64);
  for (std::size_t i = 0; i < 64; ++i) pm[i] = i % 2 ? -1.0 : 1.0;
  const MatrixFamily wide(std::vector<SymMatrix>{diag(pm)});
  const double a = sketched_family_spectral_norm(wide, 4, 400, 2).mean;
  const double b = sketched_family_spectral_norm(wide, 16, 400, 3).mean;
  CHECK(a / b >= 2.5);
  CHECK(a / b <= 5.5);
}

TEST_CASE("fixed matrix sketch norm") {
  for (std::uint64_t c = 0; c < 3; ++c) {
    const SymMatrix M = oracle::random_sym(12, 70 + c);
    for (std::size_t r : {2, 8}) {
      const auto s = fixed_matrix_sketch_norm(M, r, 300, c);
      CHECK(s.mean <= 50.0 * (spectral_norm(M) + nuclear_norm(M) / r));
    }
  }
}

TEST_CASE("psd fact") {
  CHECK(psd_fact_check(oracle::random_sym(5, 1).to_matrix()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psd_fact_check(Matrix(2, 2, {0, 1, 0, 0})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(psd_fact_check(Matrix(2, 3)), ShapeError);
  for (std::uint64_t c = 0; c < 1000; ++c) {
    const std::size_t d = 1 + c % 16;
    const Matrix M = oracle::random_matrix(d, d, 1000 + c);
    const double fro = frobenius_norm(M);
    CHECK(psd_fact_check(M) >= -1e-9 * fro * fro);
  }
}

TEST_CASE("tensor Cauchy-Schwarz") {
  const SymMatrix A = oracle::random_sym(3, 5);
  for (std::size_t k : {1, 2, 4}) {
    const std::vector<SymMatrix> As{A}, Bs{SymMatrix::identity(k)};
    const auto t = tensor_cs_check(As, Bs);
    CHECK(t.lhs == doctest::Approx(oracle::jacobi_spectral_norm(A)));
    CHECK(t.rhs == doctest::Approx(std::sqrt(static_cast<double>(k)) * oracle::jacobi_spectral_norm(A)));
  }
  const std::vector<SymMatrix> z1{SymMatrix(2), SymMatrix(2)}, z2{SymMatrix(3), SymMatrix(3)};
  const auto z = tensor_cs_check(z1, z2);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK_THROWS_AS(tensor_cs_check(z1, std::vector<SymMatrix>{SymMatrix(3)}), ShapeError);

  for (std::uint64_t c = 0; c < 200; ++c) {
    const std::size_t n = 1 + c % 4, d = 1 + c % 3, k = 1 + (c / 3) % 3;
    std::vector<SymMatrix> As, Bs;
    for (std::size_t i = 0; i < n; ++i) {
      As.push_back(oracle::random_sym(d, 5000 + 10 * c + i));
      Bs.push_back(oracle::random_sym(k, 9000 + 10 * c + i));
    }
    const auto t = tensor_cs_check(As, Bs);
    CHECK(t.lhs <= t.rhs + 1e-9);
  }
}

TEST_CASE("decoupling comparison") {
  const auto z = decoupled_norm_compare(gen(FamilyKind::Zero, 2, 3, 0), 4, 10, 1);
  CHECK(z.lhs.mean == 0.0);
  CHECK(z.cross.mean == 0.0);
  CHECK(z.mixed.mean == 0.0);
  CHECK(z.holds);

  const MatrixFamily one(std::vector<SymMatrix>{diag({1, -1})});
  const auto rep = decoupled_norm_compare(one, 8, 100000, 2);
  CHECK(rep.holds);
  CHECK(rep.lhs.mean > 0.0);

  const auto mr = decoupled_norm_compare(gen(FamilyKind::ModerateRank, 8, 8, 3), 8, 1000, 4, true);
  CHECK(mr.holds);

  const auto j1 = decoupled_norm_compare(one, 4, 50, 9, false, 1);
  const auto j4 = decoupled_norm_compare(one, 4, 50, 9, false, 4);
  CHECK(j1.lhs.mean == j4.lhs.mean);
  CHECK(j1.rhs == j4.rhs);
}
