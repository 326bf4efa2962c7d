#pragma once

#include <span>
#include <vector>

#include "scallop/fs_vector.hpp"

namespace scallop {

/// An affine subspace given by a base point and an orthonormal basis of its
/// direction space. Directions are pairwise orthonormal to 1e-12.
struct AffineSpan {
  FsVector base;
  std::vector<FsVector> directions;

  int dim() const { return static_cast<int>(directions.size()); }

  /// Coordinates of the orthogonal projection of x - base onto the
  /// direction space.
  std::vector<double> coordinates(const FsVector& x) const;

  /// base + sum coeffs[k] * directions[k].
  FsVector point(std::span<const double> coeffs) const;

  /// Orthogonal projection of x onto the subspace.
  FsVector project(const FsVector& x) const;
};

/// Smallest affine subspace containing the given points. base = points[0];
/// collinear or duplicate inputs just lower the dimension.
AffineSpan affine_span(std::span<const FsVector> points);

/// Euclidean distance from x to the subspace; 0 iff x lies in it (to 1e-10).
double dist_to_span(const FsVector& x, const AffineSpan& a);

}  // namespace scallop
