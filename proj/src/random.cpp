#include "pmstar/random.hpp"

#include <cmath>

namespace pmstar {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

PointR2 random_point(Rng& rng, double box) {
  const double x = uniform(rng, -box, box);
  const double y = uniform(rng, -box, box);
  return {x, y};
}

SymMatrix random_symmetric(Rng& rng, std::size_t n, double scale) {
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = uniform(rng, -scale, scale);
      e[i * n + j] = v;
      e[j * n + i] = v;
    }
  }
  return SymMatrix(n, std::move(e));
}

PositiveElement random_positive(Rng& rng, std::size_t n, double scale) {
  std::vector<double> b(n * n);
  for (double& v : b) v = uniform(rng, -1.0, 1.0);
  if (n > 1 && uniform(rng, 0.0, 1.0) < 0.25) {
    const auto r = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n)));
    for (std::size_t j = 0; j < n; ++j) b[std::min(r, n - 1) * n + j] = 0.0;
  }
  const double factor = scale * std::pow(10.0, uniform(rng, -2.0, 0.0));
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += b[k * n + i] * b[k * n + j];
      m[i * n + j] = factor * acc;
    }
  }
  return PositiveElement::certify(SymMatrix(n, std::move(m)));
}

PositiveElement random_nonzero_positive(Rng& rng, std::size_t n, double scale) {
  for (;;) {
    PositiveElement p = random_positive(rng, n, scale);
    if (!p.is_theta()) return p;
  }
}

SymMatrix random_with_spectrum(Rng& rng, std::size_t n, double lo, double hi) {
  const EigenDecomposition basis = eigen_decompose(random_symmetric(rng, n));
  EigenDecomposition target = basis;
  for (double& v : target.values) v = uniform(rng, lo, hi);
  return spectral_apply(target, [](double v) { return v; });
}

}  // namespace pmstar
