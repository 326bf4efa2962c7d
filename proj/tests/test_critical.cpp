#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "scallop/critical.hpp"
#include "scallop/errors.hpp"
#include "scallop/sphere_cap.hpp"

using namespace scallop;

namespace {

Evaluable linear2(double a, double b) {
  Evaluable f;
  f.f = [a, b](const FsVector& x) { return a * x.at(1) + b * x.at(2); };
  f.modulus.lipschitz = std::sqrt(a * a + b * b);
  return f;
}

Evaluable constant_fn(double c) {
  Evaluable f;
  f.f = [c](const FsVector&) { return c; };
  f.modulus.lipschitz = 1e-12;
  return f;
}

struct Built {
  WorkingDomain dom;
  Evaluable f;
  EpsSpec eps;
  ScalarField field;
  CriticalAtlas atlas;
};

Built build_case(Evaluable f, EpsSpec eps,
                 WorkingDomain dom, std::uint64_t seed = 0) {
  CoverConfig ccfg;
  ccfg.seed = seed;
  CoverPlan plan = build_cover(f, eps, dom, ccfg);
  select_radii(plan);
  ScalarField field(std::move(plan), f, eps);
  CriticalConfig kcfg;
  kcfg.seed = seed;
  CriticalAtlas atlas = theorem3_induct(field, kcfg);
  return {std::move(dom), std::move(f), eps, std::move(field),
          std::move(atlas)};
}

}  // namespace

TEST_CASE("single-ball plan: K = center, U = half-radius ball") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}, {0.0, 1.0}}, 11);
  Built b = build_case(constant_fn(1.0), EpsSpec::constant_eps(0.5), dom);
  REQUIRE(b.field.size() == 1);
  REQUIRE(b.atlas.steps.size() == 1);
  const AtlasStep& st = b.atlas.steps[0];
  CHECK(st.mu_next == 0.5);
  REQUIRE(st.k_points.size() == 1);
  CHECK(st.k_points[0] == b.field.plan().centers[0]);
  // U_0 = B(y_0, r_0/2)
  CHECK(b.atlas.u_contains(b.field.plan(), 0, b.field.plan().centers[0]));
  FsVector edge = b.field.plan().centers[0];
  edge.set(1, edge.at(1) + 0.6 * b.field.plan().radii[0]);
  CHECK(!b.atlas.u_contains(b.field.plan(), 0, edge));
}

TEST_CASE("gradient of f_1 vanishes only at the center inside B_0") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 21);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.5), dom);
  const CoverPlan& plan = b.field.plan();
  CHECK(norm(b.field.gradient_truncated(plan.centers[0], 1)) == 0.0);
  auto pts = b.dom.random_points(200, 7);
  for (const FsVector& q : pts) {
    if (!plan.in_ball(0, q)) continue;
    if (dist(q, plan.centers[0]) < 1e-3) continue;
    CHECK(norm(b.field.gradient_truncated(q, 1)) > 1e-12);
  }
}

TEST_CASE("induction ladder: orderings, floors, containment") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 26);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.4), dom);
  const CoverPlan& plan = b.field.plan();
  const int n = b.field.size();
  REQUIRE(n >= 3);
  for (int k = 1; k < n; ++k) {
    const AtlasStep& st = b.atlas.steps[k];
    double mu_k = b.atlas.steps[k - 1].mu_next;
    CHECK(mu_k < st.nu);
    CHECK(st.nu < st.lambda);
    CHECK(st.lambda < st.mu_next);
    CHECK(st.mu_next < 1.0);
    CHECK(st.lambda > 1.0 - 1.0 / (k + 1));
    CHECK(st.lambda == plan.lambda[k]);
  }
  // K_n inside U_n inside the ball
  for (int k = 0; k < n; ++k)
    for (const FsVector& p : b.atlas.steps[k].k_points) {
      CHECK(b.atlas.u_contains(plan, k, p));
      CHECK(dist(p, plan.centers[k]) < plan.radii[k]);
      CHECK(norm(b.field.gradient_truncated(p, k + 1)) <= 1e-10);
    }
}

TEST_CASE("U regions are pairwise disjoint on a dense sweep") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 26);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.4), dom);
  const CoverPlan& plan = b.field.plan();
  auto pts = b.dom.random_points(20000, 13);
  for (const FsVector& q : pts) {
    int hits = 0;
    for (std::size_t k = 0; k < b.atlas.steps.size(); ++k)
      if (b.atlas.u_contains(plan, static_cast<int>(k), q)) ++hits;
    CHECK(hits <= 1);
  }
  // annulus interval reasoning: for the same center i, the bands used by
  // distinct regions must not overlap: mu_{j+1} < nu_{j'} for j < j'
  for (std::size_t j = 1; j + 1 < b.atlas.steps.size(); ++j)
    for (std::size_t jp = j + 1; jp < b.atlas.steps.size(); ++jp)
      CHECK(b.atlas.steps[j].mu_next < b.atlas.steps[jp].nu);
}

TEST_CASE("every re-found critical point lands inside union K") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 26);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.4), dom);
  const CoverPlan& plan = b.field.plan();
  auto k_all = b.atlas.all_k_points();
  CriticalConfig cfg;
  cfg.seed = 999;  // a different seed stream than the induction used
  cfg.seeds_per_region = 40;
  const int n = b.field.size();
  for (int k = 1; k < n; ++k) {
    std::vector<int> overlap;
    for (int i = 0; i < k; ++i)
      if (dist(plan.centers[i], plan.centers[k]) <
          plan.radii[i] + plan.radii[k])
        overlap.push_back(i);
    if (overlap.empty()) continue;
    std::vector<int> ids = overlap;
    if (static_cast<int>(ids.size()) + 1 > cfg.span_dim_cap) continue;
    std::vector<FsVector> pts{plan.centers[k]};
    for (int i : ids) pts.push_back(plan.centers[i]);
    AffineSpan span = affine_span(pts);
    std::vector<FsVector> seeds;
    std::mt19937_64 rng(k * 77ULL + 5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 600 && seeds.size() < 30; ++t) {
      std::vector<double> c(span.dim());
      for (auto& v : c) v = u(rng) * plan.radii[k];
      FsVector x = span.point(c);
      if (!plan.in_ball(k, x)) continue;
      bool earlier = false;
      for (int i : overlap)
        if (plan.in_ball(i, x)) earlier = true;
      if (earlier) seeds.push_back(std::move(x));
    }
    auto region = [&](const FsVector& x) {
      if (!plan.in_scalloped_tol(k, x, 1e-9)) return false;
      for (int i : overlap)
        if (plan.in_scalloped_tol(i, x, 1e-9)) return true;
      return false;
    };
    auto found = find_critical_in_span(b.field, k + 1, span, seeds, region, cfg);
    for (const FsVector& p : found) {
      double best = 1e300;
      for (const FsVector& q : k_all) best = std::min(best, dist(p, q));
      CHECK(best <= 1e-7);
    }
  }
}

TEST_CASE("confinement: off-span points keep a nonzero gradient") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 26);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.4), dom);
  std::vector<int> truncs{1, b.field.size() / 2, b.field.size()};
  auto rep = confinement_sweep(b.field, b.dom.sample_grid, truncs);
  CHECK(rep.pass);
  CHECK(rep.points_checked > 0);
  if (rep.off_span_points > 0) CHECK(rep.min_off_span_grad > 1e-10);
}

TEST_CASE("region-specific confinement check with reduced span") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 21);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.5), dom);
  const int n = b.field.size();
  if (n >= 3) {
    auto rep = span_confinement_check(b.field, 2, {0}, b.dom.sample_grid);
    CHECK(rep.pass);
  }
}

TEST_CASE("locality partition answers for every grid point") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 26);
  Built b = build_case(linear2(0.6, 0.3), EpsSpec::constant_eps(0.4), dom);
  const CoverPlan& plan = b.field.plan();
  int inside = 0, disjoint = 0;
  for (const FsVector& q : b.dom.sample_grid) {
    LocalityResult lr = locality_partition(b.atlas, plan, q);
    REQUIRE(lr.kind != LocalityResult::Kind::Invalid);
    if (lr.kind == LocalityResult::Kind::InsideU) {
      CHECK(b.atlas.u_contains(plan, lr.n, q));
      ++inside;
    } else {
      CHECK(lr.ball_radius > 0.0);
      // the returned ball must indeed avoid every region: recheck a few
      // sample offsets inside it
      for (int s = 0; s < 4; ++s) {
        FsVector probe = q;
        probe.set(1 + (s % 2),
                  q.at(1 + (s % 2)) +
                      (s < 2 ? 0.99 : -0.99) * lr.ball_radius * 0.7);
        for (std::size_t k = 0; k < b.atlas.steps.size(); ++k)
          CHECK(!b.atlas.u_contains(plan, static_cast<int>(k), probe));
      }
      ++disjoint;
    }
  }
  CHECK(inside > 0);
  CHECK(disjoint > 0);
}

TEST_CASE("locality partition: center of first ball sits inside U_0") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}, {0.0, 1.0}}, 11);
  Built b = build_case(constant_fn(2.0), EpsSpec::constant_eps(1.0), dom);
  LocalityResult lr =
      locality_partition(b.atlas, b.field.plan(), b.field.plan().centers[0]);
  CHECK(lr.kind == LocalityResult::Kind::InsideU);
  CHECK(lr.n == 0);
  FsVector far = FsVector::from_pairs({{1, 30.0}, {2, 30.0}});
  LocalityResult lf = locality_partition(b.atlas, b.field.plan(), far);
  CHECK(lf.kind == LocalityResult::Kind::DisjointBall);
  CHECK(lf.ball_radius > 1.0);
}
