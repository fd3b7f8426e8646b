#include "pmstar/tnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmstar {
namespace {

constexpr int kDeltaSteps = 40;
constexpr int kGridPoints = 21;

void require_unit(double a, const char* what) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::domain_error(std::string(what) + ": argument outside [0, 1]");
  }
}

/// a^(n+1) for a in [0, 1), accurate for a near 1.
double product_iterate(double a, std::int64_t n) {
  if (a == 0.0) return 0.0;
  return std::exp(static_cast<double>(n + 1) * std::log1p(a - 1.0));
}

struct Failure {
  std::int64_t n;
  double value;
};

/// First n in scope with T^n(a) <= 1 - eps.
std::optional<Failure> first_failure(const TNorm& t, double a, double eps,
                                     std::int64_t n_max) {
  const double bound = 1.0 - eps;
  switch (t.form) {
    case IterateForm::Min:
      if (a > bound) return std::nullopt;
      return Failure{1, a};
    case IterateForm::Product: {
      if (a == 1.0) return std::nullopt;
      if (a * a <= bound) return Failure{1, a * a};
      // a^(n+1) <= bound  <=>  n + 1 >= log(bound) / log(a)
      const double need = std::log(bound) / std::log1p(a - 1.0);
      auto n = static_cast<std::int64_t>(std::ceil(need)) - 1;
      n = std::max<std::int64_t>(n, 1);
      while (n > 1 && product_iterate(a, n - 1) <= bound) --n;
      while (product_iterate(a, n) > bound) ++n;
      return Failure{n, product_iterate(a, n)};
    }
    case IterateForm::Generic:
      break;
  }
  double v = t(a, a);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (n > 1) v = t(v, a);
    if (!(v > bound)) return Failure{n, v};
  }
  return std::nullopt;
}

}  // namespace

double t_min(double a, double b) {
  require_unit(a, "t_min");
  require_unit(b, "t_min");
  return std::min(a, b);
}

double t_prod(double a, double b) {
  require_unit(a, "t_prod");
  require_unit(b, "t_prod");
  return a * b;
}

TNorm make_t_min() { return {"min", &t_min, IterateForm::Min}; }

TNorm make_t_prod() { return {"product", &t_prod, IterateForm::Product}; }

double iterate(const TNorm& t, double a, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("iterate: n must be >= 1");
  require_unit(a, "iterate");
  switch (t.form) {
    case IterateForm::Min:
      return a;
    case IterateForm::Product:
      return a == 1.0 ? 1.0 : product_iterate(a, n);
    case IterateForm::Generic:
      break;
  }
  double v = t(a, a);
  for (std::int64_t k = 2; k <= n; ++k) v = t(v, a);
  return v;
}

HadzicReport hadzic_check(const TNorm& t, std::span<const double> epsilons,
                          std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("hadzic_check: nMax must be >= 1");
  HadzicReport report;
  report.tnorm = t.name;
  report.n_max = n_max;
  report.scope = t.form == IterateForm::Generic ? "n <= nMax" : "all n (closed form)";

  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw std::invalid_argument("hadzic_check: epsilon must lie in (0, 1)");
    }
    HadzicEntry entry;
    entry.epsilon = eps;
    for (int k = 0; k <= kDeltaSteps && !entry.delta; ++k) {
      const double delta = std::ldexp(eps, -k);
      std::optional<double> bad_a;
      std::optional<Failure> bad;
      for (int i = 0; i < kGridPoints; ++i) {
        const double a = 1.0 - delta * i / kGridPoints;
        if (auto f = first_failure(t, a, eps, n_max)) {
          bad_a = a;
          bad = f;
          break;
        }
      }
      if (!bad) {
        entry.delta = delta;
        entry.witness_a.reset();
        entry.witness_n.reset();
        entry.witness_value.reset();
      } else {
        entry.witness_a = bad_a;
        entry.witness_n = bad->n;
        entry.witness_value = bad->value;
      }
    }
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace pmstar
