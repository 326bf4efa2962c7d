#pragma once

#include <array>
#include <vector>

#include "scallop/fs_vector.hpp"

namespace scallop {

/// Uniform-cell candidate index over ball centers, keyed by their projection
/// onto the box coordinates. Projected distance never exceeds full distance,
/// so pruning on the projection is conservative; callers always re-check with
/// exact sparse distances.
class CellIndex {
 public:
  CellIndex() = default;

  void build(const std::vector<FsVector>& centers,
             const std::vector<double>& radii,
             const std::vector<std::array<double, 2>>& box);

  bool empty() const { return count_ == 0; }

  /// Indices j (ascending) with projected dist(x, center_j) < radii[j] + slack.
  void query(const FsVector& x, double slack, std::vector<int>& out) const;

 private:
  int dim_ = 0;
  std::size_t count_ = 0;
  double cell_ = 1.0;
  double max_radius_ = 0.0;
  std::vector<double> lo_;
  std::vector<int> ncells_;
  std::vector<std::vector<int>> buckets_;
  std::vector<double> proj_;    // dim_ coords per center
  std::vector<double> radius_;
};

}  // namespace scallop
