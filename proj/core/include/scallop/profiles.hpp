#pragma once

#include <span>
#include <vector>

namespace scallop {

enum class ProfileKind { Outer, Inner, Alpha };

/// One-dimensional C-infinity building block. Three shapes:
///   Outer: 1 on (-inf, 0], 0 on [t_hi, inf), strictly decreasing between.
///   Inner: 0 on (-inf, t_lo], 1 on [t_hi, inf), strictly increasing between.
///   Alpha: value0 - amplitude*(1 - exp(-t)); strictly decreasing for t > 0,
///          never further than amplitude from value0.
/// Flat regions are exact: value() returns bitwise 0 or 1 there, which is what
/// makes the scalloped-ball supports of the partition functions exact sets.
class SmoothProfile {
 public:
  static SmoothProfile make_outer(double r);
  static SmoothProfile make_inner(double lo, double hi);
  static SmoothProfile make_alpha(double value0, double amplitude);

  double value(double t) const;
  double deriv(double t) const;

  ProfileKind kind() const { return kind_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  double value0() const { return value0_; }
  double amplitude() const { return amplitude_; }

 private:
  ProfileKind kind_ = ProfileKind::Outer;
  double t_lo_ = 0.0;
  double t_hi_ = 1.0;
  double value0_ = 0.0;
  double amplitude_ = 0.0;
};

/// Free forms of the transition bricks, usable without materializing a
/// SmoothProfile. step_down is 1 for t <= a, 0 for t >= b, C-infinity and
/// strictly decreasing in between; step_down_deriv is its derivative.
double step_down(double a, double b, double t);
double step_down_deriv(double a, double b, double t);

/// Product of one-dimensional factors theta_1(t_1) * ... * theta_n(t_n);
/// models the multidimensional gate whose support carves a scalloped ball.
struct ProductGadget {
  std::vector<SmoothProfile> factors;
};

struct ProductEval {
  double value = 1.0;
  std::vector<double> partials;  // d/dt_j of the product
};

ProductEval product_eval_and_partials(const ProductGadget& g,
                                      std::span<const double> t);

}  // namespace scallop
