#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "scallop/errors.hpp"
#include "scallop/profiles.hpp"

using namespace scallop;

namespace {

// Central-difference oracle, independent of the analytic derivative path.
double fd_deriv(const SmoothProfile& p, double t, double h) {
  return (p.value(t + h) - p.value(t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("outer profile: flats, sign, smooth transition") {
  double r = 1.3;
  SmoothProfile g = SmoothProfile::make_outer(r);
  CHECK(g.value(-0.5) == 1.0);  // exact on the flat
  CHECK(g.value(0.0) == 1.0);
  CHECK(g.value(r * r) == 0.0);
  CHECK(g.value(r * r + 1.0) == 0.0);
  CHECK(g.deriv(-0.2) == 0.0);
  CHECK(g.deriv(r * r + 0.2) == 0.0);
  CHECK(g.deriv(r * r / 2.0) < 0.0);
  double mid = g.value(r * r / 2.0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
}

TEST_CASE("inner profile: flats, sign, degenerate window") {
  double lo = 0.25, hi = 1.0;
  SmoothProfile th = SmoothProfile::make_inner(lo, hi);
  CHECK(th.value(lo - 1.0) == 0.0);
  CHECK(th.value(lo) == 0.0);
  CHECK(th.value(hi) == 1.0);
  CHECK(th.value(hi + 1.0) == 1.0);
  CHECK(th.deriv((lo + hi) / 2.0) > 0.0);
  CHECK_THROWS_AS(SmoothProfile::make_inner(1.0, 1.0 + 1e-12),
                  DegenerateTransition);
  // tiny windows at tiny scale are legitimate
  CHECK_NOTHROW(SmoothProfile::make_inner(1e-11, 2e-11));
}

TEST_CASE("alpha profile matches its closed form") {
  double v0 = 2.5, amp = 0.25;
  SmoothProfile a = SmoothProfile::make_alpha(v0, amp);
  CHECK(a.value(0.0) == v0);
  CHECK(a.deriv(1.0) == doctest::Approx(-amp * std::exp(-1.0)).epsilon(1e-15));
  double sup = 0.0;
  for (double t = 0.0; t < 40.0; t += 0.37)
    sup = std::max(sup, std::abs(a.value(t) - v0));
  CHECK(sup <= amp);
  CHECK(sup > 0.99 * amp);  // approached
  for (double t : {0.1, 1.0, 7.0}) CHECK(a.deriv(t) < 0.0);
}

TEST_CASE("analytic derivatives match finite differences to 1e-6") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  SmoothProfile profiles[] = {
      SmoothProfile::make_outer(1.1),
      SmoothProfile::make_inner(0.3, 1.7),
      SmoothProfile::make_alpha(1.0, 0.5),
  };
  for (const SmoothProfile& p : profiles) {
    for (int it = 0; it < 100; ++it) {
      double t;
      double scale;
      if (p.kind() == ProfileKind::Alpha) {
        t = 3.0 * unit(rng);
        scale = 1.0;
      } else {
        // stay inside the transition where values are representable
        t = p.t_lo() + unit(rng) * (p.t_hi() - p.t_lo());
        scale = p.t_hi() - p.t_lo();
      }
      double h = 1e-5 * scale;
      double fd = fd_deriv(p, t, h);
      double an = p.deriv(t);
      CHECK(std::abs(fd - an) <=
            1e-6 * std::max(1.0, std::abs(an)) * std::max(1.0, 1.0 / scale) *
                scale);
    }
  }
}

TEST_CASE("product gadget: value flats and partial signs") {
  // theta_(3,1), theta_(3,2) inner; theta_(3,3) outer — the n = 3 gate.
  double r1 = 1.0, r2 = 0.8, r3 = 0.6, lambda = 0.75;
  ProductGadget g;
  g.factors.push_back(
      SmoothProfile::make_inner(lambda * r1 * lambda * r1, r1 * r1));
  g.factors.push_back(
      SmoothProfile::make_inner(lambda * r2 * lambda * r2, r2 * r2));
  g.factors.push_back(SmoothProfile::make_outer(r3));

  // all earlier coordinates past their windows, last below zero: value 1
  std::vector<double> t{r1 * r1 + 0.1, r2 * r2 + 0.1, -0.05};
  auto ev = product_eval_and_partials(g, t);
  CHECK(ev.value == 1.0);

  // last coordinate beyond its window: value 0, partials consistent
  t = {r1 * r1 + 0.1, r2 * r2 + 0.1, r3 * r3 + 0.1};
  ev = product_eval_and_partials(g, t);
  CHECK(ev.value == 0.0);
  CHECK(ev.partials[2] == 0.0);

  // strictly inside every transition: signs as certified
  t = {0.9 * r1 * r1, 0.9 * r2 * r2, 0.5 * r3 * r3};
  ev = product_eval_and_partials(g, t);
  CHECK(ev.value > 0.0);
  CHECK(ev.value < 1.0);
  CHECK(ev.partials[0] > 0.0);
  CHECK(ev.partials[1] > 0.0);
  CHECK(ev.partials[2] < 0.0);
}

TEST_CASE("product partials match central finite differences") {
  double r1 = 1.0, r2 = 0.7, lambda = 0.6;
  ProductGadget g;
  g.factors.push_back(
      SmoothProfile::make_inner(lambda * r1 * lambda * r1, r1 * r1));
  g.factors.push_back(SmoothProfile::make_outer(r2));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.15, 0.85);
  for (int it = 0; it < 100; ++it) {
    double lo = lambda * r1 * lambda * r1;
    std::vector<double> t{lo + u(rng) * (r1 * r1 - lo), u(rng) * r2 * r2};
    auto ev = product_eval_and_partials(g, t);
    for (int j = 0; j < 2; ++j) {
      double scale = j == 0 ? (r1 * r1 - lo) : r2 * r2;
      double h = 1e-5 * scale;
      std::vector<double> tp = t, tm = t;
      tp[j] += h;
      tm[j] -= h;
      double fd = (product_eval_and_partials(g, tp).value -
                   product_eval_and_partials(g, tm).value) /
                  (2.0 * h);
      CHECK(std::abs(fd - ev.partials[j]) <=
            1e-6 * std::max({1.0, std::abs(ev.partials[j]), 1.0 / scale}) *
                std::max(1.0, scale));
    }
  }
}
