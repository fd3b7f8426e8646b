#include "pmstar/contraction.hpp"

namespace pmstar {

ContractionConstant::ContractionConstant(SymMatrix a)
    : a_(std::move(a)), a_inv_(a_.dim()), min_eig_(0.0), inv_norm_(0.0) {
  const Spectrum s = spectrum(a_);
  min_eig_ = s.min();
  if (!(min_eig_ >= 1.0 + kStrictMargin)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ContractionConstant: minimum eigenvalue " << min_eig_
        << " does not exceed 1 + " << kStrictMargin;
    throw AlgebraError(msg.str());
  }
  a_inv_ = inverse(a_);
  inv_norm_ = 1.0 / min_eig_;
}

AffineMap2::AffineMap2(double alpha1, double alpha2, double lambda1, double lambda2)
    : alpha1_(alpha1), alpha2_(alpha2), lambda1_(lambda1), lambda2_(lambda2) {
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2)) {
    throw std::invalid_argument("AffineMap2: offsets must be finite");
  }
  if (!(lambda1 > 0.0 && lambda1 < 1.0 && lambda2 > 0.0 && lambda2 < 1.0)) {
    throw std::invalid_argument("AffineMap2: rates must lie in (0, 1)");
  }
}

SymMatrix AffineMap2::lambda_matrix() const {
  const double s = 1.0 / std::sqrt(rate());
  return SymMatrix::diag({s, s});
}

PointR2 AffineMap2::fixed_point() const {
  return {alpha1_ / (1.0 - lambda1_), alpha2_ / (1.0 - lambda2_)};
}

CertReport shrink_certificate(const ContractionConstant& a, const PositiveElement& t) {
  if (t.is_theta()) throw std::invalid_argument("shrink_certificate: t must be > theta");
  if (t.dim() != a.a().dim()) throw AlgebraError("shrink_certificate: dimension mismatch");
  const SymMatrix shrunk = congruence(a.a_inverse(), t.matrix());
  const double k = a.inverse_norm();
  const SymMatrix bound = t.matrix() * (k * k);

  CertReport r;
  const SymMatrix slack = bound - shrunk;
  r.loewner_slack = spectrum(slack).min();
  r.norm_gap = 1.0 - k;
  r.trace_gap = trace(t.matrix() - shrunk);
  r.holds = r.loewner_slack >= -positivity_tolerance(slack) && r.norm_gap > 0.0 &&
            r.trace_gap > 0.0;
  return r;
}

}  // namespace pmstar
