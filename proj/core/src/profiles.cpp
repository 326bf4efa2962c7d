#include "scallop/profiles.hpp"

#include <cmath>

#include "scallop/errors.hpp"

namespace scallop {

namespace {

// exp(-1/u) extended by 0; the standard C-infinity splice seed.
inline double seed(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
inline double seed_deriv(double u) {
  return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0;
}

}  // namespace

// Transition evaluated in the normalized coordinate u = (t-a)/(b-a) so the
// two seeds never underflow simultaneously: max(u, 1-u) >= 1/2 keeps the
// denominator at least exp(-2).
double step_down(double a, double b, double t) {
  if (t <= a) return 1.0;
  if (t >= b) return 0.0;
  double u = (t - a) / (b - a);
  double su = seed(u);
  double sv = seed(1.0 - u);
  return sv / (sv + su);
}

double step_down_deriv(double a, double b, double t) {
  if (t <= a || t >= b) return 0.0;
  double w = b - a;
  double u = (t - a) / w;
  double su = seed(u);
  double sv = seed(1.0 - u);
  double den = sv + su;
  // d/du [ sv/(sv+su) ] = (-sv' su - sv su') / den^2 with sv' = d seed(1-u)/du.
  double num = -seed_deriv(1.0 - u) * su - sv * seed_deriv(u);
  return num / (den * den) / w;
}

SmoothProfile SmoothProfile::make_outer(double r) {
  if (!(r > 0.0)) throw Error("make_outer: r must be positive");
  SmoothProfile p;
  p.kind_ = ProfileKind::Outer;
  p.t_lo_ = 0.0;
  p.t_hi_ = r * r;
  return p;
}

SmoothProfile SmoothProfile::make_inner(double lo, double hi) {
  if (!(0.0 < lo && lo < hi)) throw Error("make_inner: need 0 < lo < hi");
  // Width floor scales with the window so tiny balls keep valid transitions;
  // at unit scale this is the literal 1e-9 absolute floor.
  if (hi - lo < 1e-9 * std::min(1.0, hi))
    throw DegenerateTransition("make_inner: transition window " +
                               std::to_string(hi - lo) +
                               " too narrow (lambda too close to 1)");
  SmoothProfile p;
  p.kind_ = ProfileKind::Inner;
  p.t_lo_ = lo;
  p.t_hi_ = hi;
  return p;
}

SmoothProfile SmoothProfile::make_alpha(double value0, double amplitude) {
  if (!(amplitude > 0.0)) throw Error("make_alpha: amplitude must be positive");
  SmoothProfile p;
  p.kind_ = ProfileKind::Alpha;
  p.value0_ = value0;
  p.amplitude_ = amplitude;
  return p;
}

double SmoothProfile::value(double t) const {
  switch (kind_) {
    case ProfileKind::Outer:
      return step_down(t_lo_, t_hi_, t);
    case ProfileKind::Inner:
      return 1.0 - step_down(t_lo_, t_hi_, t);
    case ProfileKind::Alpha:
      return value0_ - amplitude_ * (1.0 - std::exp(-t));
  }
  return 0.0;
}

double SmoothProfile::deriv(double t) const {
  switch (kind_) {
    case ProfileKind::Outer:
      return step_down_deriv(t_lo_, t_hi_, t);
    case ProfileKind::Inner:
      return -step_down_deriv(t_lo_, t_hi_, t);
    case ProfileKind::Alpha:
      return -amplitude_ * std::exp(-t);
  }
  return 0.0;
}

ProductEval product_eval_and_partials(const ProductGadget& g,
                                      std::span<const double> t) {
  const std::size_t n = g.factors.size();
  if (t.size() != n)
    throw Error("product_eval_and_partials: argument count mismatch");
  ProductEval out;
  out.partials.assign(n, 0.0);
  std::vector<double> vals(n), prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = g.factors[i].value(t[i]);
    prefix[i + 1] = prefix[i] * vals[i];
  }
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * vals[i];
  out.value = prefix[n];
  for (std::size_t j = 0; j < n; ++j)
    out.partials[j] = g.factors[j].deriv(t[j]) * prefix[j] * suffix[j + 1];
  return out;
}

}  // namespace scallop
