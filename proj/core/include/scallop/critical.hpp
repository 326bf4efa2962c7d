#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "scallop/affine_span.hpp"
#include "scallop/approximant.hpp"

namespace scallop {

struct CriticalConfig {
  int span_dim_cap = 8;        // largest search span dimension
  double grad_floor = 1e-10;   // full-gradient acceptance for a critical point
  double dedupe_tol = 1e-7;
  double mu_margin = 0.01;
  std::uint64_t seed = 0;
  int seeds_per_region = 24;
  int newton_iters = 40;
};

/// One step of the containment induction. Step k owns ball k; mu_next is the
/// containment factor chosen while processing it (the paper's mu_{k+2} when
/// k+1 is the ball number). Point sets stand in for compacts: the finite set
/// of numerically found critical points plus a covering radius.
struct AtlasStep {
  int index = 0;
  double lambda = 0.0;   // unused at step 0
  double nu = 0.0;       // unused at step 0
  double mu_next = 0.5;
  double delta = 0.0;
  bool has_delta = false;
  std::vector<FsVector> k_points;
  double covering_radius = 1e-6;
};

struct LocalityResult {
  enum class Kind { InsideU, DisjointBall, Invalid } kind = Kind::Invalid;
  int n = -1;            // owning region when InsideU
  double ball_radius = 0.0;  // positive when DisjointBall
};

class CriticalAtlas {
 public:
  std::vector<AtlasStep> steps;
  int truncated_overlap_families = 0;  // diagnostics: overlap sets over the cap

  bool u_contains(const CoverPlan& plan, int k, const FsVector& x) const;

  /// A radii-arithmetic lower bound on dist(x, U_k); positive values certify
  /// disjointness of a ball around x from U_k.
  double u_dist_lower_bound(const CoverPlan& plan, int k,
                            const FsVector& x) const;

  /// Distance from p to the complement of U_k (lower bound); sizing aid for
  /// cutoffs supported inside U_k.
  double u_interior_margin(const CoverPlan& plan, int k,
                           const FsVector& p) const;

  std::vector<FsVector> all_k_points() const;
};

/// Newton refinement of grad f_upto = 0 restricted to a span, seeded at the
/// given points; keeps solutions whose full gradient norm is below the floor
/// and which satisfy the region predicate, deduplicated.
std::vector<FsVector> find_critical_in_span(
    const ScalarField& field, int upto, const AffineSpan& span,
    const std::vector<FsVector>& seeds,
    const std::function<bool(const FsVector&)>& region,
    const CriticalConfig& cfg = {});

/// Runs the full containment induction over the field's cover, choosing the
/// lambda ladder dynamically (writing it into the plan), locating critical
/// points step by step, and assembling the K_n / U_n data.
CriticalAtlas theorem3_induct(ScalarField& field,
                              const CriticalConfig& cfg = {});

struct ConfinementReport {
  long long points_checked = 0;
  long long off_span_points = 0;
  double min_off_span_grad = std::numeric_limits<double>::infinity();
  bool pass = true;
};

/// Checks that off-span sample points in the region B_n minus the listed
/// balls carry a nonvanishing truncated gradient; the admissible span is the
/// one spanned by the non-excluded centers up to n. Throws
/// ConfinementViolation on a counterexample.
ConfinementReport span_confinement_check(const ScalarField& field, int n,
                                         const std::vector<int>& excluded,
                                         const std::vector<FsVector>& samples,
                                         double off_span_dist = 1e-3,
                                         double grad_floor = 1e-10);

/// Pattern-based sweep across all truncations: every sample x farther than
/// off_span_dist from the span of the balls it belongs to must have a
/// nonvanishing gradient at every truncation.
ConfinementReport confinement_sweep(const ScalarField& field,
                                    const std::vector<FsVector>& samples,
                                    const std::vector<int>& truncations,
                                    double off_span_dist = 1e-3,
                                    double grad_floor = 1e-10);

LocalityResult locality_partition(const CriticalAtlas& atlas,
                                  const CoverPlan& plan, const FsVector& x);

}  // namespace scallop
