#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "scallop/fs_vector.hpp"

namespace scallop {

/// Desk-scale stand-in for an open subset of the Hilbert space: a box on the
/// first D coordinates carrying a deterministic dense sample grid, plus a
/// reserved block of fresh coordinates (indices > D) that the removal stage
/// may use. Construction jitter lives beyond that block, so removal data and
/// construction data never share a coordinate.
struct WorkingDomain {
  std::vector<std::array<double, 2>> box;  // coordinate k+1 ranges over box[k]
  int resolution = 2;                      // grid points per axis
  int fresh_count = 8;                     // removal block: D+1 .. D+fresh_count
  std::vector<FsVector> sample_grid;       // row-major over the box

  int dim() const { return static_cast<int>(box.size()); }
  std::int32_t fresh_base() const { return dim() + 1; }
  std::int32_t jitter_base() const { return dim() + fresh_count + 1; }
  double diameter() const;
  bool contains(const FsVector& x) const;

  /// Regular grid with `resolution` points per axis, endpoints included.
  static WorkingDomain regular(std::vector<std::array<double, 2>> box,
                               int resolution);

  /// Like regular() but keeps only grid points satisfying the predicate.
  static WorkingDomain masked(std::vector<std::array<double, 2>> box,
                              int resolution,
                              const std::function<bool(const FsVector&)>& keep);

  /// Deterministic quasi-random points in the box (for dense sweeps beyond
  /// the certification grid).
  std::vector<FsVector> random_points(std::size_t count,
                                      std::uint64_t seed) const;
};

}  // namespace scallop
