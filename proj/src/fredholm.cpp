#include "pmstar/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "pmstar/pmspace.hpp"
#include "pmstar/random.hpp"
#include "pmstar/simd/kernels.hpp"

namespace pmstar::fredholm {
namespace {

constexpr double kStrictKappa = 1.0 - 1e-9;
constexpr double kPivotRel = 1e-12;

/// Index and fractional offset of x on the uniform n-point grid over [a, b].
std::pair<std::size_t, double> locate(double a, double b, std::size_t n, double x) {
  const double pos = (x - a) / (b - a) * static_cast<double>(n - 1);
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(n - 1));
  auto i = static_cast<std::size_t>(std::floor(clamped));
  if (i >= n - 1) i = n - 2;
  return {i, clamped - static_cast<double>(i)};
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) x[k] = a + static_cast<double>(k) * h;
  x[n - 1] = b;
  return x;
}

}  // namespace

Kernel constant_kernel(double c) {
  return [c](double, double) { return c; };
}

Kernel separable_kernel(double c) {
  return [c](double x, double t) { return c * x * t; };
}

Kernel table_kernel(double a, double b, std::vector<std::vector<double>> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("table kernel: at least 2x2 values required");
  for (const auto& row : values) {
    if (row.size() != n) throw std::invalid_argument("table kernel: table must be square");
  }
  if (!(a < b)) throw std::invalid_argument("table kernel: a < b required");
  return [a, b, n, v = std::move(values)](double x, double t) {
    const auto [i, fx] = locate(a, b, n, x);
    const auto [j, ft] = locate(a, b, n, t);
    const double top = (1.0 - ft) * v[i][j] + ft * v[i][j + 1];
    const double bottom = (1.0 - ft) * v[i + 1][j] + ft * v[i + 1][j + 1];
    return (1.0 - fx) * top + fx * bottom;
  };
}

Source constant_source(double c) {
  return [c](double) { return c; };
}

Source poly_source(std::vector<double> coeffs) {
  return [c = std::move(coeffs)](double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
}

Source table_source(double a, double b, std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("table source: at least 2 values required");
  if (!(a < b)) throw std::invalid_argument("table source: a < b required");
  return [a, b, n, v = std::move(values)](double x) {
    const auto [i, f] = locate(a, b, n, x);
    return (1.0 - f) * v[i] + f * v[i + 1];
  };
}

void Problem::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw std::invalid_argument("fredholm problem: interval must satisfy a < b");
  }
  if (m < 2) throw std::invalid_argument("fredholm problem: m must be >= 2");
  for (const auto& k : kernels) {
    if (!k) throw std::invalid_argument("fredholm problem: missing kernel");
  }
  for (const auto& g : sources) {
    if (!g) throw std::invalid_argument("fredholm problem: missing inhomogeneity");
  }
}

double kernel_norm(const Problem& prob, int grid_refine) {
  prob.validate();
  if (grid_refine < 1) throw std::invalid_argument("kernel_norm: gridRefine must be >= 1");
  const std::size_t n = static_cast<std::size_t>(grid_refine) * (prob.m - 1) + 1;
  const std::vector<double> grid = uniform_grid(prob.a, prob.b, n);

  std::array<double, 4> norms{};
  std::vector<double> row(n);
  for (std::size_t k = 0; k < 4; ++k) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = prob.kernels[k](grid[i], grid[j]);
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg << "kernel_norm: non-finite kernel value at (" << grid[i] << ", " << grid[j]
              << ")";
          throw std::invalid_argument(msg.str());
        }
        row[j] = v;
      }
      best = std::max(best, simd::max_abs(row));
    }
    norms[k] = best;
  }
  return std::max(norms[K11] + norms[K21], norms[K12] + norms[K22]);
}

ConditionReport check_contraction_condition(const Problem& prob) {
  ConditionReport r;
  r.kernel_norm = kernel_norm(prob);
  r.kappa = 2.0 * (prob.b - prob.a) * r.kernel_norm;
  r.passes = r.kappa <= kStrictKappa;
  r.degenerate = r.kappa == 0.0;
  if (r.passes && !r.degenerate) {
    const double d = 1.0 / std::sqrt(r.kappa);
    r.contraction_matrix = SymMatrix::diag({d, d});
  }
  return r;
}

NystromSystem discretize(const Problem& prob) {
  prob.validate();
  NystromSystem sys;
  const std::size_t m = prob.m;
  sys.m = m;
  sys.nodes = uniform_grid(prob.a, prob.b, m);
  const double h = (prob.b - prob.a) / static_cast<double>(m - 1);
  sys.weights.assign(m, h);
  sys.weights.front() = 0.5 * h;
  sys.weights.back() = 0.5 * h;

  const std::size_t n = 2 * m;
  sys.a.assign(n * n, 0.0);
  for (std::size_t bi = 0; bi < 2; ++bi) {
    for (std::size_t bj = 0; bj < 2; ++bj) {
      const Kernel& k = prob.kernels[2 * bi + bj];
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          const double v = sys.weights[c] * k(sys.nodes[r], sys.nodes[c]);
          if (!std::isfinite(v)) throw std::invalid_argument("discretize: non-finite kernel value");
          sys.a[(bi * m + r) * n + (bj * m + c)] = -v;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) sys.a[i * n + i] += 1.0;

  sys.rhs.resize(n);
  for (std::size_t r = 0; r < m; ++r) {
    sys.rhs[r] = prob.sources[0](sys.nodes[r]);
    sys.rhs[m + r] = prob.sources[1](sys.nodes[r]);
  }
  for (double v : sys.rhs) {
    if (!std::isfinite(v)) throw std::invalid_argument("discretize: non-finite g value");
  }
  return sys;
}

std::string to_string(Method m) { return m == Method::Picard ? "picard" : "direct"; }

std::vector<double> Solution::stacked() const {
  std::vector<double> out(phi1);
  out.insert(out.end(), phi2.begin(), phi2.end());
  return out;
}

namespace {

double residual_of(const NystromSystem& sys, std::span<const double> phi) {
  std::vector<double> ax(sys.size());
  simd::gemv(sys.a, phi, ax);
  return simd::max_abs_diff(ax, sys.rhs);
}

Solution split(const NystromSystem& sys, const std::vector<double>& phi, Method method) {
  Solution s;
  s.method = method;
  s.phi1.assign(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(sys.m));
  s.phi2.assign(phi.begin() + static_cast<std::ptrdiff_t>(sys.m), phi.end());
  s.residual = residual_of(sys, phi);
  return s;
}

std::vector<double> iteration_matrix(const NystromSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<double> b(n * n);
  for (std::size_t i = 0; i < n * n; ++i) b[i] = -sys.a[i];
  for (std::size_t i = 0; i < n; ++i) b[i * n + i] += 1.0;
  return b;
}

}  // namespace

Solution picard_iterate(const NystromSystem& sys, double tol, std::size_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("picard_iterate: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("picard_iterate: maxIter must be >= 1");
  const std::size_t n = sys.size();
  const std::vector<double> b = iteration_matrix(sys);

  std::vector<double> phi = sys.rhs;
  std::vector<double> next(n);
  double initial_step = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    simd::gemv(b, phi, next);
    simd::axpy(1.0, sys.rhs, next);
    const double step = simd::max_abs_diff(next, phi);
    if (!std::isfinite(step)) {
      throw DivergenceError("picard_iterate: non-finite iterate at step " + std::to_string(it),
                            it);
    }
    if (it == 1) initial_step = step;
    phi.swap(next);
    if (step < tol) {
      Solution s = split(sys, phi, Method::Picard);
      s.iterations = it;
      s.initial_step = initial_step;
      return s;
    }
  }
  Solution s = split(sys, phi, Method::Picard);
  s.iterations = max_iter;
  s.initial_step = initial_step;
  s.converged = false;
  return s;
}

Solution direct_solve(const NystromSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<double> m = sys.a;
  std::vector<double> x = sys.rhs;

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::fabs(m[i * n + j]);
    norm = std::max(norm, row);
  }
  auto row_tail = [&](std::size_t i, std::size_t from) {
    return std::span<double>(m).subspan(i * n + from, n - from);
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(m[i * n + k]) > std::fabs(m[piv * n + k])) piv = i;
    }
    const double pivot = m[piv * n + k];
    if (!(std::fabs(pivot) > kPivotRel * norm)) {
      std::ostringstream msg;
      msg << "direct_solve: singular system (pivot " << pivot << " at column " << k << ")";
      throw AlgebraError(msg.str());
    }
    if (piv != k) {
      std::swap_ranges(m.begin() + static_cast<std::ptrdiff_t>(k * n),
                       m.begin() + static_cast<std::ptrdiff_t>((k + 1) * n),
                       m.begin() + static_cast<std::ptrdiff_t>(piv * n));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = m[i * n + k] / pivot;
      if (factor == 0.0) continue;
      simd::axpy(-factor, row_tail(k, k), row_tail(i, k));
      x[i] -= factor * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    const double s = simd::dot(std::span<const double>(m).subspan(k * n + k + 1, n - k - 1),
                               std::span<const double>(x).subspan(k + 1, n - k - 1));
    x[k] = (x[k] - s) / m[k * n + k];
  }
  return split(sys, x, Method::Direct);
}

PointMap<FunctionPair> discrete_map(const NystromSystem& sys) {
  auto b = std::make_shared<const std::vector<double>>(iteration_matrix(sys));
  auto rhs = std::make_shared<const std::vector<double>>(sys.rhs);
  const std::size_t m = sys.m;
  return [b, rhs, m](const FunctionPair& p) {
    if (p.u.size() != m || p.v.size() != m) {
      throw std::invalid_argument("discrete map: function pair does not match the node count");
    }
    std::vector<double> in(p.u);
    in.insert(in.end(), p.v.begin(), p.v.end());
    std::vector<double> out(2 * m);
    simd::gemv(*b, in, out);
    simd::axpy(1.0, *rhs, out);
    FunctionPair r;
    r.u.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(m));
    r.v.assign(out.begin() + static_cast<std::ptrdiff_t>(m), out.end());
    return r;
  };
}

FunctionPair random_function_pair(std::mt19937_64& rng, std::size_t m) {
  const double scale = std::pow(10.0, uniform(rng, -2.0, 1.0));
  FunctionPair p;
  p.u.resize(m);
  p.v.resize(m);
  for (double& x : p.u) x = uniform(rng, -scale, scale);
  for (double& x : p.v) x = uniform(rng, -scale, scale);
  return p;
}

AxiomReport verify_d_contraction(const Problem& prob, std::size_t trials,
                                 std::mt19937_64& rng, double tol) {
  const ConditionReport cond = check_contraction_condition(prob);
  if (!cond.passes) {
    std::ostringstream msg;
    msg << "verify_d_contraction: contraction condition fails (kappa = " << cond.kappa << ")";
    throw std::invalid_argument(msg.str());
  }
  const NystromSystem sys = discretize(prob);
  const auto space = make_trace_pm(make_function_pair_metric());
  const std::size_t m = sys.m;
  // With kappa = 0 the map is constant and any D > e serves.
  const SymMatrix d = cond.contraction_matrix ? *cond.contraction_matrix
                                              : SymMatrix::identity(2) * 2.0;
  CheckResult check = check_congruence_contraction<FunctionPair>(
      space, discrete_map(sys), d,
      [m](std::mt19937_64& g) { return random_function_pair(g, m); },
      [](std::mt19937_64& g) { return random_nonzero_positive(g, 2, 10.0); }, trials, rng,
      tol);
  check.name = "d-contraction";
  check.margins["kappa"] = cond.kappa;
  if (cond.degenerate) check.note = "degenerate: exact solution phi = g";
  return AxiomReport{space.name, {check}};
}

double estimate_lipschitz(const Problem& prob, std::size_t trials, std::mt19937_64& rng) {
  const NystromSystem sys = discretize(prob);
  const auto f = discrete_map(sys);
  double worst = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const FunctionPair p = random_function_pair(rng, sys.m);
    const FunctionPair q = random_function_pair(rng, sys.m);
    const double before = trace(function_pair_metric(p, q).matrix());
    if (before == 0.0) continue;
    const double after = trace(function_pair_metric(f(p), f(q)).matrix());
    worst = std::max(worst, after / before);
  }
  return worst;
}

}  // namespace pmstar::fredholm
