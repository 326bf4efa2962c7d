#pragma once

#include <span>
#include <vector>

#include "scallop/affine_span.hpp"
#include "scallop/cover.hpp"
#include "scallop/fs_vector.hpp"

namespace scallop {

struct Sphere {
  FsVector center;
  double radius = 1.0;
};

/// Intersection of finitely many spheres with an affine subspace, computed in
/// the subspace's coordinates: pairwise subtraction of the sphere equations
/// leaves a linear system plus one quadratic. Kinds:
///   Points     - a finite point set (possibly of size 1 or 2).
///   Empty      - no real solution.
///   Degenerate - a positive-dimensional solution set (rank deficiency).
struct SphereCapResult {
  enum class Kind { Points, Empty, Degenerate };
  Kind kind = Kind::Empty;
  std::vector<FsVector> points;
};

SphereCapResult spheres_cap_span(std::span<const Sphere> spheres,
                                 const AffineSpan& a);

struct RadiiConfig {
  int family_cap = 6;          // largest sphere family examined
  double residual_floor = 1e-8;
};

/// Moves each radius into [s_n, 1.5 s_n] so that no sphere passes through any
/// center and no admissible sphere family meets its own centers' affine span.
/// The forbidden set is realized as finitely many excluded reals (norms of
/// intersection points and center distances); each radius is the midpoint of
/// the widest admissible gap.
void select_radii(CoverPlan& plan, const RadiiConfig& cfg = {});

struct TransversalityReport {
  double min_residual = std::numeric_limits<double>::infinity();
  long long families_checked = 0;
  long long degenerate_families = 0;
  bool pass = true;
};

/// Re-checks the selected radii: over every admissible family (largest index
/// last), the intersection points of the earlier spheres with the family span
/// stay off the last sphere by more than the residual floor, and centers stay
/// off every sphere.
TransversalityReport verify_sphere_transversality(const CoverPlan& plan,
                                                  const RadiiConfig& cfg = {});

}  // namespace scallop
