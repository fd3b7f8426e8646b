#pragma once

// Seeded sampling helpers shared by the axiom checkers, the CLI and the tests.

#include <cstdint>
#include <random>
#include <string_view>

#include "pmstar/cmetric.hpp"
#include "pmstar/symcone.hpp"

namespace pmstar {

using Rng = std::mt19937_64;

/// Deterministic per-check seed: splitmix64 over the run seed mixed with an
/// FNV-1a hash of the label.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

double uniform(Rng& rng, double lo, double hi);

/// Uniform point in [-box, box]^2.
PointR2 random_point(Rng& rng, double box = 10.0);

/// Symmetric matrix with entries uniform in [-scale, scale].
SymMatrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0);

/// B^T B with B uniform in [-1, 1]^{n x n}, scaled by a log-uniform factor in
/// [1e-2 scale, scale]. About one sample in four is rank deficient.
PositiveElement random_positive(Rng& rng, std::size_t n, double scale = 1.0);

/// Same as random_positive but never numerically theta.
PositiveElement random_nonzero_positive(Rng& rng, std::size_t n, double scale = 1.0);

/// Q diag(lambda) Q^T with a random orthonormal Q and eigenvalues uniform in
/// [lo, hi].
SymMatrix random_with_spectrum(Rng& rng, std::size_t n, double lo, double hi);

}  // namespace pmstar
