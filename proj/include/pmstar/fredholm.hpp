#pragma once

// Second-kind Fredholm system in two unknowns
//
//   phi_i(x) = g_i(x) + int_a^b K_i1(x,t) phi_1(t) + K_i2(x,t) phi_2(t) dt,
//
// discretised by the Nyström method on uniform nodes with the composite
// trapezoid rule. The fixed-point solve is the contraction route; Gaussian
// elimination on the same system is the independent oracle.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pmstar/cmetric.hpp"
#include "pmstar/contraction.hpp"
#include "pmstar/report.hpp"
#include "pmstar/symcone.hpp"

namespace pmstar::fredholm {

using Kernel = std::function<double(double x, double t)>;
using Source = std::function<double(double x)>;

Kernel constant_kernel(double c);
/// c x t
Kernel separable_kernel(double c);
/// Bilinear interpolation of an n x n table on the uniform grid over
/// [a, b]^2; values[r][c] is K(x_r, t_c).
Kernel table_kernel(double a, double b, std::vector<std::vector<double>> values);

Source constant_source(double c);
/// sum_k coeffs[k] x^k
Source poly_source(std::vector<double> coeffs);
/// Linear interpolation of samples on the uniform grid over [a, b].
Source table_source(double a, double b, std::vector<double> values);

enum KernelIndex : std::size_t { K11 = 0, K12 = 1, K21 = 2, K22 = 3 };

struct Problem {
  double a = 0.0;
  double b = 1.0;
  /// K11, K12, K21, K22.
  std::array<Kernel, 4> kernels;
  /// g1, g2.
  std::array<Source, 2> sources;
  std::size_t m = 2;

  /// Throws std::invalid_argument unless a < b, m >= 2 and every
  /// capability is set.
  void validate() const;
};

struct NystromSystem {
  std::size_t m = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  /// 2m x 2m, row-major: [[I - W K11, -W K12], [-W K21, I - W K22]] with
  /// (W K)[r][c] = w_c K(x_r, x_c).
  std::vector<double> a;
  /// g1 and g2 at the nodes, stacked.
  std::vector<double> rhs;

  std::size_t size() const { return 2 * m; }
};

/// Grid refinement used by check_contraction_condition.
inline constexpr int kDefaultGridRefine = 4;

/// max(|K11| + |K21|, |K12| + |K22|) with each |K_ij| the maximum modulus
/// over a uniform grid of refine (m - 1) + 1 points per axis, which contains
/// the Nyström nodes. Throws on non-finite kernel values.
double kernel_norm(const Problem& prob, int grid_refine = kDefaultGridRefine);

struct ConditionReport {
  double kernel_norm = 0.0;
  /// 2 (b - a) ||K||.
  double kappa = 0.0;
  bool passes = false;
  /// kappa == 0: the map is constant and phi = g exactly.
  bool degenerate = false;
  /// diag(1/sqrt(kappa), 1/sqrt(kappa)) when passes and not degenerate.
  std::optional<SymMatrix> contraction_matrix;
};

/// Passes iff kappa <= 1 - 1e-9.
ConditionReport check_contraction_condition(const Problem& prob);

NystromSystem discretize(const Problem& prob);

enum class Method { Picard, Direct };
std::string to_string(Method m);

struct Solution {
  std::vector<double> phi1;
  std::vector<double> phi2;
  Method method = Method::Direct;
  std::size_t iterations = 0;
  /// sup-norm of A phi - rhs.
  double residual = 0.0;
  bool converged = true;
  /// sup-norm of the first Picard step (phi_1 - phi_0); zero for Direct.
  double initial_step = 0.0;

  /// (phi1, phi2) stacked.
  std::vector<double> stacked() const;
};

/// phi <- rhs + (I - A) phi from phi_0 = rhs until the sup-norm step drops
/// below tol. Throws DivergenceError on non-finite values; returns
/// converged = false when max_iter is exhausted.
Solution picard_iterate(const NystromSystem& sys, double tol, std::size_t max_iter);

/// Gaussian elimination with partial pivoting. Throws AlgebraError when a
/// pivot falls to 1e-12 ||A||_inf or below.
Solution direct_solve(const NystromSystem& sys);

/// The discretised map f(Phi) = rhs + (I - A) Phi on node-sampled pairs.
PointMap<FunctionPair> discrete_map(const NystromSystem& sys);

/// Uniform node values in [-scale, scale] with a log-uniform scale in
/// [1e-2, 10].
FunctionPair random_function_pair(std::mt19937_64& rng, std::size_t m);

/// Verifies F_{f Phi, f Psi}(C) >= F_{Phi,Psi}(D C D) on the trace PM*-space
/// over the function-pair metric, D = diag(1/sqrt(kappa)). Throws
/// std::invalid_argument when the contraction condition fails.
AxiomReport verify_d_contraction(const Problem& prob, std::size_t trials,
                                 std::mt19937_64& rng, double tol = 1e-12);

/// max over sampled pairs of tr d(f Phi, f Psi) / tr d(Phi, Psi).
double estimate_lipschitz(const Problem& prob, std::size_t trials, std::mt19937_64& rng);

}  // namespace pmstar::fredholm
