#include "pmstar/cmetric.hpp"

#include <sstream>

#include "pmstar/simd/kernels.hpp"

namespace pmstar {

std::string to_string(const PointR2& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p.x << ", " << p.y << ')';
  return os.str();
}

bool is_finite(const PointR2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

PointR2 scale_toward_origin(const PointR2& p, double s) { return {p.x * s, p.y * s}; }

std::string to_string(const FunctionPair& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(u[" << p.u.size() << "], v[" << p.v.size() << "]; |u|=" << simd::max_abs(p.u)
     << ", |v|=" << simd::max_abs(p.v) << ')';
  return os.str();
}

bool is_finite(const FunctionPair& p) {
  for (double x : p.u) {
    if (!std::isfinite(x)) return false;
  }
  for (double x : p.v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

FunctionPair scale_toward_origin(const FunctionPair& p, double s) {
  FunctionPair out = p;
  for (double& x : out.u) x *= s;
  for (double& x : out.v) x *= s;
  return out;
}

PositiveElement diag_metric(const PointR2& p, const PointR2& q) {
  return PositiveElement::certify(
      SymMatrix::diag({std::fabs(p.x - q.x), std::fabs(p.y - q.y)}));
}

CStarMetric<PointR2> make_diag_metric() {
  return {"diag", 2, [](const PointR2& p, const PointR2& q) {
            return SymMatrix::diag({std::fabs(p.x - q.x), std::fabs(p.y - q.y)});
          }};
}

namespace {

SymMatrix function_pair_distance(const FunctionPair& p, const FunctionPair& q) {
  const double s = simd::max_abs_diff(p.u, q.u) + simd::max_abs_diff(p.v, q.v);
  return SymMatrix::diag({s, s});
}

}  // namespace

PositiveElement function_pair_metric(const FunctionPair& p, const FunctionPair& q) {
  return PositiveElement::certify(function_pair_distance(p, q));
}

CStarMetric<FunctionPair> make_function_pair_metric() {
  return {"function-pair", 2, &function_pair_distance};
}

}  // namespace pmstar
