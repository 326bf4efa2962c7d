#include "scallop/independence.hpp"

#include <cmath>
#include <random>

#include "scallop/affine_span.hpp"
#include "scallop/errors.hpp"

namespace scallop {

double gram_det(std::span<const FsVector> vectors) {
  const std::size_t n = vectors.size();
  std::vector<double> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      g[i * n + j] = g[j * n + i] = inner(vectors[i], vectors[j]);
  // Cholesky; det = prod of squared pivots.
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double d = g[k * n + k];
    for (std::size_t i = 0; i < k; ++i) d -= g[k * n + i] * g[k * n + i];
    if (!(d > 0.0)) return 0.0;
    double l = std::sqrt(d);
    g[k * n + k] = l;
    det *= d;
    for (std::size_t r = k + 1; r < n; ++r) {
      double s = g[r * n + k];
      for (std::size_t i = 0; i < k; ++i) s -= g[r * n + i] * g[k * n + i];
      g[r * n + k] = s / l;
    }
  }
  return det;
}

double independence_pivot(std::span<const FsVector> vectors) {
  std::vector<FsVector> ortho;
  double worst = 1.0;
  for (const FsVector& v : vectors) {
    double scale = norm(v);
    if (scale == 0.0) return 0.0;
    FsVector r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const FsVector& d : ortho) r = axpy(-inner(r, d), d, r);
    double res = norm(r);
    worst = std::min(worst, res / scale);
    if (res == 0.0) return 0.0;
    r *= 1.0 / res;
    ortho.push_back(std::move(r));
  }
  return worst;
}

std::vector<FsVector> perturb_to_independent(std::span<const FsVector> centers,
                                             std::span<const double> radii,
                                             int group_count,
                                             const PerturbOptions& opts) {
  if (centers.size() != radii.size())
    throw Error("perturb_to_independent: centers/radii size mismatch");
  if (group_count < 1) throw Error("perturb_to_independent: group_count < 1");
  for (double r : radii)
    if (!(r > 0.0)) throw Error("perturb_to_independent: radii must be positive");

  const double kPivotFloor = 1e-7;
  std::vector<FsVector> pooled(centers.begin(), centers.end());

  if (!pooled.empty() && independence_pivot(pooled) > kPivotFloor) {
    bool nonzero = true;
    for (const FsVector& c : pooled) nonzero = nonzero && !c.is_zero();
    if (nonzero) return pooled;
  }

  std::mt19937_64 rng(opts.seed);
  std::int32_t max_used = opts.jitter_base - 1;
  for (const FsVector& c : pooled) max_used = std::max(max_used, c.max_index());
  const std::int32_t base = std::max(opts.jitter_base, max_used + 1);

  for (std::size_t n = 0; n < pooled.size(); ++n) {
    double sign = (rng() & 1) ? 1.0 : -1.0;
    FsVector y = pooled[n];
    y.set(base + static_cast<std::int32_t>(n), sign * radii[n] / 4.0);
    pooled[n] = std::move(y);
  }

  double pivot = independence_pivot(pooled);
  if (!(pivot > 0.0))
    throw IndependenceFailure(
        "perturb_to_independent: could not certify independence (pivot " +
        std::to_string(pivot) + "); retry with a new jitter seed");
  return pooled;
}

}  // namespace scallop
