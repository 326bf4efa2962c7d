#include "scallop/affine_span.hpp"

#include <cmath>

namespace scallop {

std::vector<double> AffineSpan::coordinates(const FsVector& x) const {
  FsVector rel = x - base;
  std::vector<double> c(directions.size());
  for (std::size_t k = 0; k < directions.size(); ++k)
    c[k] = inner(rel, directions[k]);
  return c;
}

FsVector AffineSpan::point(std::span<const double> coeffs) const {
  FsVector p = base;
  for (std::size_t k = 0; k < directions.size() && k < coeffs.size(); ++k)
    p = axpy(coeffs[k], directions[k], p);
  return p;
}

FsVector AffineSpan::project(const FsVector& x) const {
  FsVector rel = x - base;
  FsVector p = base;
  for (const FsVector& d : directions) p = axpy(inner(rel, d), d, p);
  return p;
}

AffineSpan affine_span(std::span<const FsVector> points) {
  AffineSpan a;
  if (points.empty()) return a;
  a.base = points[0];
  for (std::size_t k = 1; k < points.size(); ++k) {
    FsVector v = points[k] - a.base;
    double scale = norm(v);
    if (scale == 0.0) continue;
    // Modified Gram-Schmidt, run twice for orthogonality at the 1e-12 level.
    for (int pass = 0; pass < 2; ++pass)
      for (const FsVector& d : a.directions) v = axpy(-inner(v, d), d, v);
    double res = norm(v);
    if (res > 1e-12 * std::max(1.0, scale)) {
      v *= 1.0 / res;
      a.directions.push_back(std::move(v));
    }
  }
  return a;
}

double dist_to_span(const FsVector& x, const AffineSpan& a) {
  FsVector rel = x - a.base;
  for (const FsVector& d : a.directions) rel = axpy(-inner(rel, d), d, rel);
  return norm(rel);
}

}  // namespace scallop
