#include <cstdlib>
#include <string>
#include <vector>

#include "discrepancy/errors.hpp"
#include "discrepancy/kernels.hpp"
#include "kernels_impl.hpp"

namespace discrepancy::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::axpy, &scalar::rot, &scalar::scale};

#if defined(DISCREPANCY_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::axpy, &avx2::rot, &avx2::scale};
#endif

bool cpu_has_avx2() {
#if defined(DISCREPANCY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("DISCREPANCY_SIMD")) {
    if (std::string(env) == "scalar") return kScalar;
  }
  if (isa_available(Isa::Avx2)) return table(Isa::Avx2);
  return kScalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::Scalar) return kScalar;
#if defined(DISCREPANCY_HAVE_AVX2)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return kAvx2;
#endif
  throw ConfigError("kernel ISA not available: " + std::string(isa_name(isa)));
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

void gemm_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  const auto& t = active();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip != 0.0) t.axpy(aip, b + p * n, crow, n);
    }
  }
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  const auto& t = active();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = t.dot(a + i * k, b + j * k, k);
  }
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 32;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace discrepancy::kernels
