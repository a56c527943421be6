#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "discrepancy/errors.hpp"
#include "discrepancy/matcore.hpp"
#include "oracles.hpp"

using namespace discrepancy;

namespace {

double frob_diff(const SymMatrix& a, const SymMatrix& b) { return frobenius_norm(a - b); }

}  // namespace

TEST_CASE("SymMatrix mirrors the upper triangle and rejects bad data") {
  SymMatrix m(2, {1.0, 2.0, 5.0, 3.0});
  CHECK(m(0, 1) == 2.0);
  CHECK(m(1, 0) == 2.0);
  CHECK_THROWS_AS(SymMatrix(2, {1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(SymMatrix(1, {std::numeric_limits<double>::quiet_NaN()}), InvalidMatrix);
  CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), ShapeError);
}

TEST_CASE("eig_sym on small fixed matrices") {
  const auto id = eig_sym(SymMatrix::identity(3));
  for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<double> diag{3.0, 1.0, 2.0};
  const auto s = eig_sym(SymMatrix::diagonal(diag));
  CHECK(s.values[0] == doctest::Approx(3.0));
  CHECK(s.values[1] == doctest::Approx(2.0));
  CHECK(s.values[2] == doctest::Approx(1.0));
}

TEST_CASE("eig_sym reconstructs, is orthonormal and agrees with a Jacobi oracle") {
  for (std::uint64_t seed : {7u, 8u, 9u, 10u}) {
    for (std::size_t d : {1u, 2u, 5u, 8u, 17u, 32u}) {
      const SymMatrix m = oracle::random_sym(d, seed);
      const Spectrum s = eig_sym(m);
      CHECK(frob_diff(reconstruct(s), m) <= 1e-10 * std::max(1.0, frobenius_norm(m)));
      const Matrix qqt = multiply_nt(s.vectors, s.vectors);
      CHECK(frobenius_norm(qqt - Matrix::identity(d)) <= 1e-10 * static_cast<double>(d));
      for (std::size_t k = 1; k < d; ++k) CHECK(s.values[k - 1] >= s.values[k]);
      const auto ref = oracle::jacobi_eigenvalues(m);
      const auto fast = eigvals_sym(m);
      for (std::size_t k = 0; k < d; ++k) {
        CHECK(s.values[k] == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
        CHECK(fast[k] == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("eig_sym handles degenerate spectra") {
  // Hadamard-diagonal sums have heavily repeated eigenvalues.
  const Matrix H = hadamard(8);
  std::vector<double> row(H.row(3).begin(), H.row(3).end());
  const SymMatrix m = SymMatrix::diagonal(row) + SymMatrix::identity(8);
  const Spectrum s = eig_sym(m);
  CHECK(frob_diff(reconstruct(s), m) <= 1e-12);
  CHECK(s.values.front() == doctest::Approx(2.0));
  CHECK(s.values.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral and nuclear norms") {
  const std::vector<double> d{-5.0, 2.0};
  CHECK(spectral_norm(SymMatrix::diagonal(d)) == doctest::Approx(5.0));
  CHECK(nuclear_norm(SymMatrix::diagonal(d)) == doctest::Approx(7.0));
  CHECK(spectral_norm(SymMatrix(4)) == 0.0);
  const std::vector<double> u{1.0, 2.0, 2.0};  // ‖u‖ = 3
  CHECK(spectral_norm(SymMatrix::outer(u)) == doctest::Approx(9.0));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t dim = 1 + seed % 12;
    const SymMatrix m = oracle::random_sym(dim, seed + 100);
    const auto ev = oracle::jacobi_eigenvalues(m);
    double nuc = 0.0;
    for (double v : ev) nuc += std::abs(v);
    CHECK(nuclear_norm(m) == doctest::Approx(nuc).epsilon(1e-10));
    const double sn = spectral_norm(m), fn = frobenius_norm(m);
    CHECK(sn <= fn + 1e-9);
    CHECK(fn <= nuclear_norm(m) + 1e-9);
    // PSD case: nuclear norm equals trace
    const SymMatrix p = square(m);
    CHECK(nuclear_norm(p) == doctest::Approx(p.trace()).epsilon(1e-9));
  }
}

TEST_CASE("hermitian_dilation matches singular values") {
  const SymMatrix one = hermitian_dilation(Matrix(1, 1, {1.0}));
  CHECK(one(0, 1) == 1.0);
  CHECK(one(0, 0) == 0.0);
  CHECK(spectral_norm(one) == doctest::Approx(1.0));
  CHECK(spectral_norm(hermitian_dilation(Matrix(2, 3))) == 0.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix B = oracle::random_matrix(3, 2, seed);
    const SymMatrix BtB(multiply(B.transpose(), B));
    const double sigma = std::sqrt(oracle::jacobi_eigenvalues(BtB).front());
    CHECK(spectral_norm(hermitian_dilation(B)) == doctest::Approx(sigma).epsilon(1e-10));
    CHECK(operator_norm(B) == doctest::Approx(sigma).epsilon(1e-10));
  }
}

TEST_CASE("psd_split") {
  const std::vector<double> d{2.0, -3.0};
  const auto s = psd_split(SymMatrix::diagonal(d));
  CHECK(s.plus(0, 0) == doctest::Approx(2.0));
  CHECK(std::abs(s.plus(1, 1)) < 1e-12);
  CHECK(s.minus(1, 1) == doctest::Approx(-3.0));

  const SymMatrix p = square(oracle::random_sym(5, 3));
  const auto sp = psd_split(p);
  CHECK(frob_diff(sp.plus, p) < 1e-10);
  CHECK(frobenius_norm(sp.minus) < 1e-10);

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t dim = 1 + seed % 32;
    const SymMatrix y = oracle::random_sym(dim, seed + 5000);
    const auto parts = psd_split(y);
    REQUIRE(frob_diff(parts.plus + parts.minus, y) <= 1e-10 * std::max(1.0, frobenius_norm(y)));
    REQUIRE(min_eigenvalue(parts.plus) >= -1e-10 * std::max(1.0, frobenius_norm(y)));
    REQUIRE(-min_eigenvalue(-parts.minus) <= 1e-10 * std::max(1.0, frobenius_norm(y)));
    const Matrix prod = multiply(parts.plus.to_matrix(), parts.minus.to_matrix());
    REQUIRE(frobenius_norm(prod) <= 1e-9 * std::max(1.0, frobenius_norm(y) * frobenius_norm(y)));
    REQUIRE(nuclear_norm(y) == doctest::Approx(parts.plus.trace() - parts.minus.trace()).epsilon(1e-9));
  }
}

TEST_CASE("MatrixFamily cached statistics") {
  std::vector<SymMatrix> mats;
  for (std::uint64_t s = 0; s < 6; ++s) mats.push_back(oracle::random_sym(7, s + 300));
  const MatrixFamily f(mats);
  double frob_sq = 0.0;
  SymMatrix sum(7);
  for (const auto& m : mats) {
    frob_sq += frobenius_norm(m) * frobenius_norm(m);
    sum = sum + square(m);
  }
  CHECK(f.sum_sq_trace() == doctest::Approx(frob_sq).epsilon(1e-8));
  CHECK(f.sum_sq_norm() == doctest::Approx(oracle::jacobi_spectral_norm(sum)).epsilon(1e-10));
  CHECK(min_eigenvalue(f.sum_sq()) >= -1e-9 * f.sum_sq_trace());
  CHECK(f.spectral_norms()[2] == doctest::Approx(oracle::jacobi_spectral_norm(mats[2])).epsilon(1e-10));

  CHECK_THROWS_AS(MatrixFamily(std::vector<SymMatrix>{}), ConfigError);
  CHECK_THROWS_AS(MatrixFamily(std::vector<SymMatrix>{SymMatrix(2), SymMatrix(3)}), ShapeError);

  const MatrixFamily rec = f.recentred();
  CHECK(rec.max_abs_trace() < 1e-12);
  CHECK(f.scaled(2.0).sum_sq_norm() == doctest::Approx(4.0 * f.sum_sq_norm()));
}

TEST_CASE("block_dilate_pair") {
  const SymMatrix rho = square(oracle::random_sym(4, 1));
  const SymMatrix psd = (1.0 / rho.trace()) * rho;
  std::vector<SymMatrix> mats;
  for (std::uint64_t s = 0; s < 5; ++s) mats.push_back(oracle::random_sym(4, s + 40));
  const MatrixFamily fam(mats);

  const auto pure = block_dilate_pair(psd, fam);
  CHECK(pure.y_block.trace() == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(pure.y_block(i, j) == doctest::Approx(psd(i, j)).epsilon(1e-9).scale(1.0));
      CHECK(std::abs(pure.y_block(4 + i, 4 + j)) < 1e-9);
    }

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SymMatrix y = oracle::random_sym(4, seed + 900);
    const auto b = block_dilate_pair(y, fam);
    for (std::size_t i = 0; i < fam.size(); ++i)
      CHECK(inner(b.y_block, b.family_block[i]) == doctest::Approx(inner(y, fam[i])).epsilon(1e-9).scale(1.0));
    CHECK(b.family_block.sum_sq_norm() == doctest::Approx(fam.sum_sq_norm()).epsilon(1e-9));
    CHECK(b.family_block.sum_sq_trace() == doctest::Approx(2.0 * fam.sum_sq_trace()).epsilon(1e-9));
    CHECK(min_eigenvalue(b.y_block) >= -1e-9);
    CHECK(b.y_block.trace() == doctest::Approx(nuclear_norm(y)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(block_dilate_pair(SymMatrix(3), fam), ShapeError);
}

TEST_CASE("gen_family kinds") {
  GenSpec spec;
  spec.kind = FamilyKind::HadamardRows;
  spec.n = spec.d = 4;
  const MatrixFamily h = gen_family(spec, 1);
  const Matrix H = hadamard(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(h[i](j, j) == H(i, j));
      if (i != j) CHECK(h[0](i, j) == 0.0);
    }

  spec.kind = FamilyKind::ModerateRank;
  spec.n = spec.d = 16;
  const MatrixFamily mr = gen_family(spec, 3);
  for (const auto& m : mr.matrices()) {
    CHECK(frobenius_norm(m) * frobenius_norm(m) == doctest::Approx(4.0));
    CHECK(frobenius_norm(m) * frobenius_norm(m) <= std::sqrt(16.0) + 1e-9);
    const auto ev = oracle::jacobi_eigenvalues(m);
    int ones = 0, zeros = 0;
    for (double v : ev) {
      if (std::abs(std::abs(v) - 1.0) < 1e-9) ++ones;
      if (std::abs(v) < 1e-9) ++zeros;
    }
    CHECK(ones == 4);
    CHECK(zeros == 12);
  }

  for (FamilyKind k : {FamilyKind::GaussianUnit, FamilyKind::DiagonalVectors, FamilyKind::SparseDiagonal,
                       FamilyKind::ModerateRank, FamilyKind::HadamardRows, FamilyKind::Zero}) {
    GenSpec s;
    s.kind = k;
    s.n = 8;
    s.d = 8;
    const MatrixFamily a = gen_family(s, 42), b = gen_family(s, 42);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == b[i]);
      CHECK(a.spectral_norms()[i] <= 1.0 + 1e-9);
    }
    if (k == FamilyKind::GaussianUnit)
      for (double nrm : a.spectral_norms()) CHECK(nrm == doctest::Approx(1.0));
  }

  GenSpec bad;
  bad.kind = FamilyKind::HadamardRows;
  bad.n = 3;
  bad.d = 6;
  CHECK_THROWS_AS(gen_family(bad, 0), ConfigError);
  CHECK_THROWS_AS(parse_family_kind("triangles"), ConfigError);
}

TEST_CASE("family JSON round trip and malformed input") {
  GenSpec spec;
  spec.kind = FamilyKind::GaussianUnit;
  spec.n = 5;
  spec.d = 6;
  const MatrixFamily f = gen_family(spec, 11);
  const MatrixFamily g = family_from_json(family_to_json(f));
  REQUIRE(g.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
  CHECK(g.meta().kind == "gaussian_unit");
  CHECK(g.meta().seed == 11);

  const auto path = std::filesystem::temp_directory_path() / "discrepancy_family_roundtrip.json";
  write_family(f, path);
  const MatrixFamily h = read_family(path);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(h[i] == f[i]);
  std::filesystem::remove(path);

  const MatrixFamily one = family_from_json(R"({"version":1,"n":1,"d":1,"matrices":[[2.0]]})");
  CHECK(one.spectral_norms()[0] == 2.0);

  CHECK_THROWS_AS(family_from_json(R"({"version":1,"n":0,"d":1,"matrices":[]})"), ParseError);
  CHECK_THROWS_AS(family_from_json(R"({"version":1,"n":2,"d":1,"matrices":[[1.0]]})"), ShapeError);
  CHECK_THROWS_AS(family_from_json(R"({"version":1,"n":1,"d":2,"matrices":[[1.0,2.0,3.0,1.0]]})"), InvalidMatrix);
  try {
    family_from_json("{\n\"n\": 1,\n\"d\": oops}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(read_family("/nonexistent/family.json"), ConfigError);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK_THROWS(format_double(std::numeric_limits<double>::infinity()));
}
