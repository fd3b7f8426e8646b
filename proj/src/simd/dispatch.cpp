#include "pmstar/simd/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace pmstar::simd {
namespace {

constexpr KernelTable kScalar{
    &scalar::dot,     &scalar::axpy,         &scalar::gemv,
    &scalar::max_abs, &scalar::max_abs_diff, &scalar::rotate,
};

#if defined(PMSTAR_HAVE_AVX2)
constexpr KernelTable kAvx2{
    &avx2::dot,     &avx2::axpy,         &avx2::gemv,
    &avx2::max_abs, &avx2::max_abs_diff, &avx2::rotate,
};
#endif

bool cpu_has_avx2() {
#if defined(PMSTAR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa best_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{best_isa()};
  return isa;
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  return isa == Isa::Scalar || (isa == Isa::Avx2 && cpu_has_avx2());
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  selected().store(isa, std::memory_order_relaxed);
  return true;
}

void reset_isa() { selected().store(best_isa(), std::memory_order_relaxed); }

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(PMSTAR_HAVE_AVX2)
  return &kAvx2;
#else
  return nullptr;
#endif
}

const KernelTable& kernels(Isa isa) {
#if defined(PMSTAR_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2;
#else
  (void)isa;
#endif
  return kScalar;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "dot");
  return kernels(active_isa()).dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_length(x.size(), y.size(), "axpy");
  kernels(active_isa()).axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::span<const double> x,
          std::span<double> y) {
  require_same_length(a.size(), x.size() * y.size(), "gemv");
  kernels(active_isa()).gemv(a.data(), x.data(), y.data(), y.size(), x.size());
}

double max_abs(std::span<const double> x) {
  return kernels(active_isa()).max_abs(x.data(), x.size());
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "max_abs_diff");
  return kernels(active_isa()).max_abs_diff(x.data(), y.data(), x.size());
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  require_same_length(x.size(), y.size(), "rotate");
  kernels(active_isa()).rotate(x.data(), y.data(), c, s, x.size());
}

}  // namespace pmstar::simd
