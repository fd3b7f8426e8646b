#pragma once

#include <cstddef>

// Per-ISA kernel entry points. Only the dispatcher and the equivalence
// tests include this header.

namespace pmstar::simd::scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, const double* x, double* y, std::size_t rows,
          std::size_t cols);
double max_abs(const double* x, std::size_t n);
double max_abs_diff(const double* x, const double* y, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace pmstar::simd::scalar

#if defined(PMSTAR_HAVE_AVX2)
namespace pmstar::simd::avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* a, const double* x, double* y, std::size_t rows,
          std::size_t cols);
double max_abs(const double* x, std::size_t n);
double max_abs_diff(const double* x, const double* y, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace pmstar::simd::avx2
#endif
