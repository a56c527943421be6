#pragma once

#include <cstddef>

namespace discrepancy::kernels::scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void rot(double* a, double* b, double c, double s, std::size_t n);
void scale(double alpha, const double* x, double* y, std::size_t n);
}  // namespace discrepancy::kernels::scalar

#if defined(DISCREPANCY_HAVE_AVX2)
namespace discrepancy::kernels::avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void rot(double* a, double* b, double c, double s, std::size_t n);
void scale(double alpha, const double* x, double* y, std::size_t n);
}  // namespace discrepancy::kernels::avx2
#endif
