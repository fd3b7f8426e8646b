#pragma once

// Dense double-precision kernels used by the eigensolver, the Nyström
// solvers and the sup-norm reductions.
//
// Every kernel has a scalar reference implementation. An AVX2 variant is
// compiled in a separate translation unit and picked at runtime when the
// CPU supports it. Callers go through the dispatching free functions at the
// bottom of this header; tests can reach each variant directly.

#include <cstddef>
#include <span>
#include <string_view>

namespace pmstar::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Instruction set the dispatcher currently routes to.
Isa active_isa();

/// True when the running CPU can execute the AVX2 variants and they were
/// compiled in.
bool isa_available(Isa isa);

/// Forces the dispatcher onto `isa`. Returns false (and leaves the
/// selection unchanged) when that variant is unavailable.
bool set_isa(Isa isa);

/// Restores the automatic choice (best available variant).
void reset_isa();

/// Function table for one instruction set. All spans passed to a kernel
/// must have matching lengths; the dispatching wrappers check this.
struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A row-major with `rows` x `cols`
  void (*gemv)(const double* a, const double* x, double* y, std::size_t rows,
               std::size_t cols);
  double (*max_abs)(const double* x, std::size_t n);
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
  // (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
};

const KernelTable& scalar_kernels();
/// Null when the AVX2 variants were not compiled in.
const KernelTable* avx2_kernels();

const KernelTable& kernels(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> a, std::span<const double> x,
          std::span<double> y);
double max_abs(std::span<const double> x);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
void rotate(std::span<double> x, std::span<double> y, double c, double s);

}  // namespace pmstar::simd
