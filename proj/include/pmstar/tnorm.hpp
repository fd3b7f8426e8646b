#pragma once

// Triangular norms, their iterates T^n and an equicontinuity-at-1 probe.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pmstar {

/// Closed forms the iterate and Hadzic routines can exploit.
enum class IterateForm { Generic, Min, Product };

struct TNorm {
  std::string name;
  std::function<double(double, double)> op;
  IterateForm form = IterateForm::Generic;

  double operator()(double a, double b) const { return op(a, b); }
};

/// min(a, b); throws std::domain_error outside [0,1].
double t_min(double a, double b);
/// a * b; throws std::domain_error outside [0,1].
double t_prod(double a, double b);

TNorm make_t_min();
TNorm make_t_prod();

/// T^1(a) = T(a, a), T^n(a) = T(T^{n-1}(a), a). Throws for n < 1 or a
/// outside [0,1].
double iterate(const TNorm& t, double a, std::int64_t n);

struct HadzicEntry {
  double epsilon = 0.0;
  /// Largest grid delta = eps 2^-k that certifies, if any.
  std::optional<double> delta;
  /// Failure witness for the smallest delta tried when none certifies.
  std::optional<double> witness_a;
  std::optional<std::int64_t> witness_n;
  std::optional<double> witness_value;
};

struct HadzicReport {
  std::string tnorm;
  std::int64_t n_max = 0;
  /// "all n (closed form)" when the iterate family is known exactly,
  /// otherwise "n <= nMax".
  std::string scope;
  std::vector<HadzicEntry> entries;

  bool ok() const {
    for (const auto& e : entries) {
      if (!e.delta) return false;
    }
    return true;
  }
};

/// For each epsilon searches delta in {eps 2^-k : k = 0..40} such that
/// T^n(a) > 1 - eps on the 21-point grid a_i = 1 - delta i / 21 in
/// (1 - delta, 1] for every n in scope. With a closed-form family the scope
/// is every n >= 1; otherwise it is 1 <= n <= nMax. Throws for nMax < 1 or
/// epsilon outside (0, 1).
HadzicReport hadzic_check(const TNorm& t, std::span<const double> epsilons,
                          std::int64_t n_max);

}  // namespace pmstar
