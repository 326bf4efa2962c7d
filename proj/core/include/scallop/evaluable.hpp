#pragma once

#include <functional>

#include "scallop/fs_vector.hpp"

namespace scallop {

using RealFn = std::function<double(const FsVector&)>;

/// Modulus-of-continuity hint for a scalar function: omega(d) bounds the
/// oscillation |f(x)-f(y)| over ||x-y|| <= d. Continuity alone is not
/// machine-checkable; the hint is caller-asserted and every bound derived
/// from it is re-verified by sampled certificates downstream.
struct Modulus {
  double lipschitz = 0.0;
  std::function<double(double)> omega;  // overrides lipschitz when set

  double operator()(double d) const {
    return omega ? omega(d) : lipschitz * d;
  }
  bool valid() const { return static_cast<bool>(omega) || lipschitz > 0.0; }

  /// Largest s <= s_max with omega(s) <= bound (bisection for a general
  /// omega; closed form when only a Lipschitz constant is given).
  double inverse(double bound, double s_max) const {
    if (!omega) {
      if (lipschitz <= 0.0) return s_max;
      double s = bound / lipschitz;
      return s < s_max ? s : s_max;
    }
    if ((*this)(s_max) <= bound) return s_max;
    double lo = 0.0, hi = s_max;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((*this)(mid) <= bound)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }
};

/// A scalar function together with its continuity hint.
struct Evaluable {
  RealFn f;
  Modulus modulus;
};

/// Constant or function-valued accuracy budget epsilon.
struct EpsSpec {
  bool is_constant = true;
  double constant = 1.0;
  Evaluable fn;

  static EpsSpec constant_eps(double v) {
    EpsSpec e;
    e.is_constant = true;
    e.constant = v;
    return e;
  }
  static EpsSpec variable_eps(Evaluable fn) {
    EpsSpec e;
    e.is_constant = false;
    e.fn = std::move(fn);
    return e;
  }
  double at(const FsVector& x) const {
    return is_constant ? constant : fn.f(x);
  }
};

}  // namespace scallop
