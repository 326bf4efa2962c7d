#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "scallop/cover.hpp"
#include "scallop/errors.hpp"
#include "scallop/sphere_cap.hpp"

using namespace scallop;

namespace {

Evaluable linear_x1(double slope = 1.0) {
  Evaluable f;
  f.f = [slope](const FsVector& x) { return slope * x.at(1); };
  f.modulus.lipschitz = std::abs(slope);
  return f;
}

Evaluable constant_fn(double c) {
  Evaluable f;
  f.f = [c](const FsVector&) { return c; };
  f.modulus.lipschitz = 1e-12;  // modulus must be positive to be valid
  return f;
}

}  // namespace

TEST_CASE("constant function needs a single ball") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}, {0.0, 1.0}}, 11);
  CoverPlan plan = build_cover(constant_fn(3.0), EpsSpec::constant_eps(0.5), dom);
  CHECK(plan.size() == 1);
  for (const FsVector& q : dom.sample_grid) CHECK(plan.in_ball(0, q));
  CHECK(plan.osc_cert[0] == 0.0);
}

TEST_CASE("linear map on the unit interval: certificates meet the budget") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}}, 101);
  double eps = 0.8;
  CoverPlan plan = build_cover(linear_x1(), EpsSpec::constant_eps(eps), dom);
  REQUIRE(plan.size() >= 2);
  for (int k = 0; k < plan.size(); ++k) {
    CHECK(plan.osc_cert[k] <= eps / 4.0 + 1e-12);
    CHECK(plan.raw_radii[k] > 0.0);
    CHECK(plan.radii[k] >= plan.raw_radii[k]);
  }
  // lambda ladder: 1/2 < lambda_2 < ... < 1
  for (int k = 1; k < plan.size(); ++k) {
    CHECK(plan.lambda[k] > 0.5);
    CHECK(plan.lambda[k] < 1.0);
    if (k >= 2) CHECK(plan.lambda[k] > plan.lambda[k - 1]);
  }
}

TEST_CASE("variable epsilon: centers respect the 4/3 comparison") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}}, 81);
  Evaluable eps_fn;
  eps_fn.f = [](const FsVector& x) { return 1.0 + x.at(1); };
  eps_fn.modulus.lipschitz = 1.0;
  EpsSpec eps = EpsSpec::variable_eps(eps_fn);
  CoverPlan plan = build_cover(linear_x1(), eps, dom);
  for (int k = 0; k < plan.size(); ++k) {
    CHECK(plan.osc_cert[k] <= plan.eps_at_center[k] / 8.0 + 1e-12);
    for (const FsVector& q : dom.sample_grid) {
      if (dist(q, plan.centers[k]) <= plan.radii[k])
        CHECK(plan.eps_at_center[k] <= (4.0 / 3.0) * eps.at(q) + 1e-12);
    }
  }
}

TEST_CASE("grid coverage and bounded local overlap") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 41);
  CoverPlan plan = build_cover(linear_x1(0.8), EpsSpec::constant_eps(0.5), dom);
  RadiiConfig rcfg;
  select_radii(plan, rcfg);
  std::size_t max_active = 0;
  for (const FsVector& q : dom.sample_grid) {
    auto active = plan.active_set(q);
    CHECK(!active.empty());
    max_active = std::max(max_active, active.size());
    // membership consistency with the per-ball predicate
    for (int k : active) CHECK(plan.in_scalloped(k, q));
  }
  CHECK(max_active <= 64);
}

TEST_CASE("scalloped membership: first covering index always active") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.6}, {0.0, 0.6}}, 21);
  CoverPlan plan = build_cover(linear_x1(0.8), EpsSpec::constant_eps(0.6), dom);
  select_radii(plan);
  // B_0 has no holes: its center is always active in it
  CHECK(plan.in_scalloped(0, plan.centers[0]));
  for (const FsVector& q : dom.sample_grid) {
    auto nb = plan.ball_neighbors(q, 0.0);
    REQUIRE(!nb.empty());
    CHECK(plan.in_scalloped(nb.front(), q));
  }
}

TEST_CASE("ball budget error") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}}, 201);
  CoverConfig cfg;
  cfg.n_max = 3;
  CHECK_THROWS_AS(
      build_cover(linear_x1(), EpsSpec::constant_eps(0.05), dom, cfg),
      CoverBudgetExceeded);
}

TEST_CASE("plan serialization round-trips") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 1.0}}, 41);
  CoverPlan plan = build_cover(linear_x1(), EpsSpec::constant_eps(0.7), dom);
  select_radii(plan);
  CoverPlan back = CoverPlan::from_text(plan.to_text());
  REQUIRE(back.size() == plan.size());
  for (int k = 0; k < plan.size(); ++k) {
    CHECK(back.centers[k] == plan.centers[k]);
    CHECK(back.radii[k] == plan.radii[k]);
    CHECK(back.lambda[k] == plan.lambda[k]);
    CHECK(back.osc_cert[k] == plan.osc_cert[k]);
  }
  CHECK(back.to_text() == plan.to_text());
}

// --- sphere cap / radius lemma ---------------------------------------------

TEST_CASE("one sphere sliced by a line") {
  FsVector zero;
  std::vector<FsVector> pts{zero, FsVector::unit(1)};
  AffineSpan line = affine_span(pts);
  Sphere s{zero, 1.0};
  auto res = spheres_cap_span(std::span<const Sphere>(&s, 1), line);
  REQUIRE(res.kind == SphereCapResult::Kind::Points);
  REQUIRE(res.points.size() == 2);
  double d0 = std::min(dist(res.points[0], FsVector::unit(1)),
                       dist(res.points[1], FsVector::unit(1)));
  double d1 = std::min(dist(res.points[0], -1.0 * FsVector::unit(1)),
                       dist(res.points[1], -1.0 * FsVector::unit(1)));
  CHECK(d0 <= 1e-12);
  CHECK(d1 <= 1e-12);
}

TEST_CASE("two circles in the plane: the analytic lens points") {
  // circles radius 1.5 about (0,0) and (2,0): x = 1, y = +-sqrt(1.25)
  FsVector zero;
  FsVector c2 = FsVector::unit(1, 2.0);
  std::vector<FsVector> pts{zero, FsVector::unit(1), FsVector::unit(2)};
  AffineSpan plane = affine_span(pts);
  std::vector<Sphere> spheres{{zero, 1.5}, {c2, 1.5}};
  auto res = spheres_cap_span(spheres, plane);
  REQUIRE(res.kind == SphereCapResult::Kind::Points);
  REQUIRE(res.points.size() == 2);
  const double y = std::sqrt(1.25);
  for (const FsVector& p : res.points) {
    CHECK(p.at(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.at(2)) == doctest::Approx(y).epsilon(1e-12));
  }
}

TEST_CASE("far spheres produce an empty intersection") {
  FsVector zero;
  std::vector<FsVector> pts{zero, FsVector::unit(1), FsVector::unit(2)};
  AffineSpan plane = affine_span(pts);
  std::vector<Sphere> spheres{{zero, 0.4}, {FsVector::unit(1), 0.4}};
  auto res = spheres_cap_span(spheres, plane);
  CHECK(res.kind == SphereCapResult::Kind::Empty);
}

TEST_CASE("a full sphere inside a plane is degenerate") {
  FsVector zero;
  std::vector<FsVector> pts{zero, FsVector::unit(1), FsVector::unit(2)};
  AffineSpan plane = affine_span(pts);
  Sphere s{zero, 1.0};
  auto res = spheres_cap_span(std::span<const Sphere>(&s, 1), plane);
  CHECK(res.kind == SphereCapResult::Kind::Degenerate);
}

TEST_CASE("select_radii: bounds, residuals, scale equivariance") {
  WorkingDomain dom = WorkingDomain::regular({{0.0, 0.7}, {0.0, 0.7}}, 26);
  CoverPlan plan = build_cover(linear_x1(0.9), EpsSpec::constant_eps(0.5), dom);
  select_radii(plan);
  for (int k = 0; k < plan.size(); ++k) {
    CHECK(plan.radii[k] >= plan.raw_radii[k]);
    CHECK(plan.radii[k] <= 1.5 * plan.raw_radii[k]);
  }
  auto rep = verify_sphere_transversality(plan);
  CHECK(rep.pass);
  CHECK(rep.min_residual > 1e-8);

  // joint scaling of centers and radii scales the selected radii
  CoverPlan scaled = plan;
  const double factor = 10.0;
  for (int k = 0; k < scaled.size(); ++k) {
    scaled.centers[k] *= factor;
    scaled.raw_radii[k] *= factor;
    scaled.radii[k] = scaled.raw_radii[k];
  }
  for (auto& iv : scaled.box) {
    iv[0] *= factor;
    iv[1] *= factor;
  }
  scaled.rebuild_index();
  select_radii(scaled);
  for (int k = 0; k < plan.size(); ++k)
    CHECK(scaled.radii[k] ==
          doctest::Approx(factor * plan.radii[k]).epsilon(1e-9));
}

TEST_CASE("two centers on a line: chosen radii avoid the sphere pair trap") {
  // centers 0 and e1 with s = 1: r in [1, 1.5] both; the two-sphere
  // intersection with the line through the centers must stay off both.
  CoverPlan plan;
  plan.dim = 1;
  plan.box = {{-2.0, 3.0}};
  plan.centers = {FsVector{}, FsVector::unit(1)};
  plan.raw_radii = {1.0, 1.0};
  plan.radii = plan.raw_radii;
  plan.lambda = {0.0, 0.75};
  plan.osc_cert = {0.0, 0.0};
  plan.eps_at_center = {1.0, 1.0};
  plan.rebuild_index();
  select_radii(plan);
  auto rep = verify_sphere_transversality(plan);
  CHECK(rep.pass);
  // centers off both spheres
  CHECK(std::abs(dist(plan.centers[0], plan.centers[1]) - plan.radii[0]) > 1e-8);
  CHECK(std::abs(dist(plan.centers[0], plan.centers[1]) - plan.radii[1]) > 1e-8);
}
