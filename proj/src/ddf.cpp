#include "pmstar/ddf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmstar {
namespace {

std::string value_at(const char* label, const PositiveElement& c, double v) {
  std::ostringstream os;
  os.precision(17);
  os << label << " F(" << to_string(c.matrix()) << ") = " << v;
  return os.str();
}

}  // namespace

double h0(const PositiveElement& c) { return c.is_theta() ? 0.0 : 1.0; }

double exp_trace(const PositiveElement& c) {
  if (c.is_theta()) return 0.0;
  return -std::expm1(-trace(c.matrix()));
}

DdfKernel make_h0() { return {"H0", &h0}; }

DdfKernel make_exp_trace() { return {"exp-trace", &exp_trace}; }

AxiomReport check_ddf_axioms(const DdfKernel& f, const ConeSampler& sampler,
                             std::size_t trials, std::mt19937_64& rng,
                             const DdfCheckOptions& opts) {
  if (trials == 0) throw std::invalid_argument("check_ddf_axioms: trials must be >= 1");

  CheckResult at_theta{"theta"};
  CheckResult monotone{"monotone"};
  CheckResult limit{"cone_limit"};
  CheckResult ray{"left_continuity"};

  // The dimension is taken from the sampler.
  const std::size_t n = sampler(rng).dim();

  {
    const PositiveElement zero = PositiveElement::zero(n);
    const double v = f(zero);
    at_theta.record(v == 0.0, [&] { return value_at("nonzero at theta:", zero, v); });
    at_theta.margins["value"] = v;
  }
  {
    const PositiveElement big = PositiveElement::identity(n).scaled(opts.limit_scale);
    const double v = f(big);
    limit.record(v >= opts.limit_threshold,
                 [&] { return value_at("below the limit threshold:", big, v); });
    limit.margins["value"] = v;
  }

  for (std::size_t t = 0; t < trials; ++t) {
    const PositiveElement a = sampler(rng);
    const PositiveElement b = a + sampler(rng);
    if (!loewner_leq(a.matrix(), b.matrix())) {
      monotone.record_skip();
    } else {
      const double fa = f(a);
      const double fb = f(b);
      monotone.record(fa <= fb + opts.monotone_tol, [&] {
        return value_at("decrease:", a, fa) + " > " + value_at("", b, fb);
      });
      monotone.track_min("min_slack", fb - fa);
    }

    const PositiveElement c = sampler(rng);
    if (c.is_theta()) {
      ray.record_skip();
    } else {
      const double fc = f(c);
      const double fs = f(c.scaled(opts.ray_factor));
      const double gap = std::fabs(fc - fs);
      ray.record(gap <= opts.ray_tol, [&] {
        std::ostringstream os;
        os.precision(17);
        os << "jump along ray: |F(sC) - F(C)| = " << gap << " at C = "
           << to_string(c.matrix()) << ", s = " << opts.ray_factor;
        return os.str();
      });
      ray.track_max("max_gap", gap);
    }
  }

  return AxiomReport{f.name, {at_theta, monotone, limit, ray}};
}

}  // namespace pmstar
