#pragma once

// Dense BLAS-1 style inner loops used by the matrix code. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// variant is chosen once per process from CPUID; setting the environment
// variable DISCREPANCY_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace discrepancy::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[k] += alpha * x[k]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // (a, b) <- (c*a - s*b, s*a + c*b)
  void (*rot)(double* a, double* b, double c, double s, std::size_t n);
  // y[k] = alpha * x[k]
  void (*scale)(double alpha, const double* x, double* y, std::size_t n);
};

/// Table for a specific ISA. Throws ConfigError if it is not compiled in
/// or not supported by the running CPU.
const KernelTable& table(Isa isa);

bool isa_available(Isa isa);

/// The table selected for this process.
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void rot(std::span<double> a, std::span<double> b, double c, double s) {
  active().rot(a.data(), b.data(), c, s, a.size());
}

inline void scale(double alpha, std::span<const double> x, std::span<double> y) {
  active().scale(alpha, x.data(), y.data(), x.size());
}

/// C (m x n) += A (m x k) * B (k x n), all row-major and contiguous.
void gemm_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

/// C (m x n) = A (m x k) * B^T where B is (n x k), all row-major.
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);

/// Pairwise (cascade) summation; order-stable for a fixed input sequence.
double pairwise_sum(std::span<const double> values);

}  // namespace discrepancy::kernels
