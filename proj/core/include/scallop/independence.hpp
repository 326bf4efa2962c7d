#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scallop/fs_vector.hpp"

namespace scallop {

struct PerturbOptions {
  std::uint64_t seed = 0;
  /// First coordinate available for jitter. Must lie beyond every coordinate
  /// used by the construction so the perturbed set cannot collide with
  /// existing data (the removal stage reserves its own block below this).
  std::int32_t jitter_base = 1;
};

/// Gram determinant of the given vectors (Cholesky of the Gram matrix).
/// Returns 0 when the matrix is not numerically positive definite.
double gram_det(std::span<const FsVector> vectors);

/// Smallest relative Gram-Schmidt residual over the set: for each vector, the
/// norm of its component orthogonal to the span of the previous ones, divided
/// by its own norm. Positive iff the set is linearly independent; this is the
/// certificate that stays representable when the set is large (a plain Gram
/// determinant underflows past a few dozen vectors).
double independence_pivot(std::span<const FsVector> vectors);

/// Moves each center x_n to a point y_n with ||y_n - x_n|| < radii[n]/2 so
/// that the pooled output set (all group_count groups together) is linearly
/// independent. Centers already certifying independence are returned
/// unchanged. Jitter is deterministic: magnitude radii[n]/4 along a basis
/// direction exclusive to entry n (sign drawn from the seed).
///
/// Throws IndependenceFailure when the result cannot be certified.
std::vector<FsVector> perturb_to_independent(std::span<const FsVector> centers,
                                             std::span<const double> radii,
                                             int group_count,
                                             const PerturbOptions& opts = {});

}  // namespace scallop
