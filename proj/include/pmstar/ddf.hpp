#pragma once

// Distance distribution functions on the positive cone A_+.

#include <cstddef>
#include <functional>
#include <random>
#include <string>

#include "pmstar/report.hpp"
#include "pmstar/symcone.hpp"

namespace pmstar {

/// Evaluation capability F : A_+ -> [0, 1].
struct DdfKernel {
  std::string name;
  std::function<double(const PositiveElement&)> eval;

  double operator()(const PositiveElement& c) const { return eval(c); }
};

/// 0 at (numerical) theta, 1 on every other positive element.
double h0(const PositiveElement& c);

/// 0 at theta, 1 - exp(-tr C) otherwise.
double exp_trace(const PositiveElement& c);

DdfKernel make_h0();
DdfKernel make_exp_trace();

using ConeSampler = std::function<PositiveElement(std::mt19937_64&)>;

/// Tolerances and probe points used by check_ddf_axioms.
struct DdfCheckOptions {
  double monotone_tol = 1e-12;
  double limit_scale = 1e4;
  double limit_threshold = 0.999;
  double ray_factor = 1.0 - 1e-8;
  double ray_tol = 1e-6;
};

/// Checks F(theta) = 0, Loewner monotonicity on sampled comparable pairs
/// (A, A + P), the cone limit F(t e) >= 0.999 at t = 1e4, and left
/// continuity along rays s C with s -> 1-. The ray probe stays inside the
/// open ray (0, 1] C, so the jump of H0 at theta is not visited.
AxiomReport check_ddf_axioms(const DdfKernel& f, const ConeSampler& sampler,
                             std::size_t trials, std::mt19937_64& rng,
                             const DdfCheckOptions& opts = {});

}  // namespace pmstar
