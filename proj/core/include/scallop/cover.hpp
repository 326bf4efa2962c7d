#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "scallop/cell_index.hpp"
#include "scallop/domain.hpp"
#include "scallop/evaluable.hpp"
#include "scallop/fs_vector.hpp"

namespace scallop {

struct CoverConfig {
  int n_max = 4000;
  std::uint64_t seed = 0;
  /// A grid point counts as covered when within this fraction of the seed
  /// radius of a chosen center; the remaining margin absorbs the
  /// independence jitter, keeping Eq.-(3)-style coverage by the final balls.
  double greedy_fraction = 0.7;
};

/// Output of the greedy pass: centers still sitting on grid points, with
/// their oscillation-derived seed radii s_n.
struct GreedyCover {
  std::vector<FsVector> centers;
  std::vector<double> raw_radii;
};

/// The covering data of the construction: independent centers y_n, seed radii
/// s_n, working radii r_n in [s_n, 1.5 s_n], the lambda ladder defining the
/// scalloped balls, and per-ball oscillation certificates.
struct CoverPlan {
  std::vector<std::array<double, 2>> box;
  int dim = 0;
  std::vector<FsVector> centers;
  std::vector<double> raw_radii;
  std::vector<double> radii;
  std::vector<double> lambda;         // lambda[0] unused; 1/2 < lambda_k < 1
  std::vector<double> osc_cert;       // sampled max |f(y) - f(y_k)|
  std::vector<double> eps_at_center;  // epsilon(y_k)
  bool variable_eps = false;
  CellIndex index;

  int size() const { return static_cast<int>(centers.size()); }

  /// Balls j (ascending) with dist(x, y_j) < r_j + slack; exact distances.
  std::vector<int> ball_neighbors(const FsVector& x, double slack) const;

  bool in_ball(int k, const FsVector& x) const;

  /// Membership in the scalloped ball B_k: inside ball k and strictly
  /// outside every closed ball (y_j, lambda_k r_j) with j < k.
  bool in_scalloped(int k, const FsVector& x) const;

  /// Membership widened by a tolerance band on every defining inequality
  /// (accepts boundary points found by root refinement).
  bool in_scalloped_tol(int k, const FsVector& x, double tol) const;

  /// All k with x in B_k, ascending.
  std::vector<int> active_set(const FsVector& x) const;

  void rebuild_index();
  double index_slack() const;  // max seed radius, a safe query slack unit

  std::string to_text() const;
  static CoverPlan from_text(const std::string& text);
};

/// Greedy oscillation-certified cover of the sample grid. Centers are placed
/// on uncovered grid points in deterministic order (shrinking epsilon first).
GreedyCover greedy_cover(const Evaluable& f, const EpsSpec& eps,
                         const WorkingDomain& dom, const CoverConfig& cfg);

/// Attaches perturbed centers, computes lambda defaults and the sampled
/// oscillation certificates, and verifies coverage of the grid.
CoverPlan finalize_cover(const GreedyCover& greedy,
                         std::vector<FsVector> perturbed_centers,
                         const Evaluable& f, const EpsSpec& eps,
                         const WorkingDomain& dom);

/// greedy_cover + independence perturbation + finalize, single group.
CoverPlan build_cover(const Evaluable& f, const EpsSpec& eps,
                      const WorkingDomain& dom, const CoverConfig& cfg = {});

}  // namespace scallop
