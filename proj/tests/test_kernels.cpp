#include <doctest.h>

#include <cmath>
#include <vector>

#include "discrepancy/kernels.hpp"
#include "oracles.hpp"

using namespace discrepancy::kernels;

TEST_CASE("scalar kernels match naive loops") {
  const auto& s = table(Isa::Scalar);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 1000u}) {
    const auto a = oracle::gaussian(n, 1), b = oracle::gaussian(n, 2);
    long double ref = 0;
    for (std::size_t k = 0; k < n; ++k) ref += static_cast<long double>(a[k]) * b[k];
    CHECK(s.dot(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12).scale(1.0));

    std::vector<double> y = b;
    s.axpy(0.5, a.data(), y.data(), n);
    for (std::size_t k = 0; k < n; ++k) CHECK(y[k] == doctest::Approx(b[k] + 0.5 * a[k]));
  }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
    return;
  }
  const auto& s = table(Isa::Scalar);
  const auto& v = table(Isa::Avx2);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 8u, 15u, 16u, 17u, 31u, 64u, 257u, 4096u}) {
    const auto a = oracle::gaussian(n, 10 + n), b = oracle::gaussian(n, 20 + n);
    double mag = 0.0;
    for (std::size_t k = 0; k < n; ++k) mag += std::abs(a[k] * b[k]);
    CHECK(std::abs(v.dot(a.data(), b.data(), n) - s.dot(a.data(), b.data(), n)) <= 1e-14 * (1.0 + mag));

    std::vector<double> y1 = b, y2 = b;
    s.axpy(-1.25, a.data(), y1.data(), n);
    v.axpy(-1.25, a.data(), y2.data(), n);
    for (std::size_t k = 0; k < n; ++k) CHECK(y1[k] == doctest::Approx(y2[k]).epsilon(1e-15).scale(1.0));

    std::vector<double> p1 = a, q1 = b, p2 = a, q2 = b;
    s.rot(p1.data(), q1.data(), 0.6, 0.8, n);
    v.rot(p2.data(), q2.data(), 0.6, 0.8, n);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(p1[k] == doctest::Approx(p2[k]).epsilon(1e-15).scale(1.0));
      CHECK(q1[k] == doctest::Approx(q2[k]).epsilon(1e-15).scale(1.0));
    }

    std::vector<double> z1(n), z2(n);
    s.scale(3.0, a.data(), z1.data(), n);
    v.scale(3.0, a.data(), z2.data(), n);
    CHECK(z1 == z2);
  }
}

TEST_CASE("gemm helpers match a triple loop") {
  const std::size_t m = 5, k = 7, n = 3;
  const auto a = oracle::gaussian(m * k, 3), b = oracle::gaussian(k * n, 4), bt = oracle::gaussian(n * k, 5);
  std::vector<double> c(m * n, 1.0);
  gemm_acc(a.data(), b.data(), c.data(), m, k, n);
  std::vector<double> d(m * n);
  gemm_nt(a.data(), bt.data(), d.data(), m, k, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double ref = 1.0, ref_nt = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        ref += a[i * k + l] * b[l * n + j];
        ref_nt += a[i * k + l] * bt[j * k + l];
      }
      CHECK(c[i * n + j] == doctest::Approx(ref).epsilon(1e-13));
      CHECK(d[i * n + j] == doctest::Approx(ref_nt).epsilon(1e-13));
    }
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.1).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(!isa_name(active().isa).empty());
}
