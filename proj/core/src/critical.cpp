#include "scallop/critical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "scallop/errors.hpp"

namespace scallop {

// ---------------------------------------------------------------------------
// Atlas region membership
//
// Step 0:  U_0 = B(y_0, mu_next_0 * r_0).
// Step k:  U_k = [ B(y_k, r_k) \ U_i<k clB(y_i, nu_k r_i) ]
//               cap [ U_i<k B(y_i, mu_next_k r_i) ]   ( ∪ B(y_k, delta_k) )

bool CriticalAtlas::u_contains(const CoverPlan& plan, int k,
                               const FsVector& x) const {
  const AtlasStep& st = steps[k];
  double dk = dist(x, plan.centers[k]);
  if (k == 0) return dk < st.mu_next * plan.radii[0];
  if (st.has_delta && dk < st.delta) return true;
  if (dk >= plan.radii[k]) return false;
  bool in_mu_union = false;
  for (int i = 0; i < k; ++i) {
    double di = dist(x, plan.centers[i]);
    if (di <= st.nu * plan.radii[i]) return false;
    if (di < st.mu_next * plan.radii[i]) in_mu_union = true;
  }
  return in_mu_union;
}

double CriticalAtlas::u_dist_lower_bound(const CoverPlan& plan, int k,
                                         const FsVector& x) const {
  const AtlasStep& st = steps[k];
  double dk = dist(x, plan.centers[k]);
  if (k == 0) return dk - st.mu_next * plan.radii[0];
  double main_lb = dk - plan.radii[k];
  double mu_term = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    double di = dist(x, plan.centers[i]);
    main_lb = std::max(main_lb, st.nu * plan.radii[i] - di);
    mu_term = std::min(mu_term, di - st.mu_next * plan.radii[i]);
  }
  main_lb = std::max(main_lb, mu_term);
  if (!st.has_delta) return main_lb;
  return std::min(main_lb, dk - st.delta);
}

double CriticalAtlas::u_interior_margin(const CoverPlan& plan, int k,
                                        const FsVector& p) const {
  const AtlasStep& st = steps[k];
  double dk = dist(p, plan.centers[k]);
  if (k == 0) return st.mu_next * plan.radii[0] - dk;
  double margin_main = plan.radii[k] - dk;
  double mu_best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    double di = dist(p, plan.centers[i]);
    margin_main = std::min(margin_main, di - st.nu * plan.radii[i]);
    mu_best = std::max(mu_best, st.mu_next * plan.radii[i] - di);
  }
  margin_main = std::min(margin_main, mu_best);
  if (st.has_delta) return std::max(margin_main, st.delta - dk);
  return margin_main;
}

std::vector<FsVector> CriticalAtlas::all_k_points() const {
  std::vector<FsVector> out;
  for (const AtlasStep& st : steps)
    out.insert(out.end(), st.k_points.begin(), st.k_points.end());
  return out;
}

// ---------------------------------------------------------------------------
// Span-restricted critical search

namespace {

// Solves the k x k normal equations (plain Gaussian elimination with partial
// pivoting, Tikhonov-damped on the diagonal).
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b,
                              double ridge) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n; ++i) a[i * n + i] += ridge;
  for (int col = 0; col < n; ++col) {
    int best = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[best * n + col])) best = r;
    for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[best * n + c]);
    std::swap(b[col], b[best]);
    double piv = a[col * n + col];
    if (piv == 0.0) return {};
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r * n + col] / piv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int i = 0; i < n; ++i) b[i] /= a[i * n + i];
  return b;
}

}  // namespace

std::vector<FsVector> find_critical_in_span(
    const ScalarField& field, int upto, const AffineSpan& span,
    const std::vector<FsVector>& seeds,
    const std::function<bool(const FsVector&)>& region,
    const CriticalConfig& cfg) {
  const int k = span.dim();
  std::vector<FsVector> found;
  if (k > cfg.span_dim_cap)
    throw Error("find_critical_in_span: span dimension over the cap");

  auto grad_at = [&](const std::vector<double>& c) {
    return field.try_gradient_truncated(span.point(c), upto);
  };

  for (const FsVector& seed : seeds) {
    std::vector<double> c = span.coordinates(seed);
    std::optional<FsVector> g0 = grad_at(c);
    if (!g0) continue;
    FsVector g = std::move(*g0);
    double f2 = norm_sq(g);
    double h0 = 1e-7;
    for (int it = 0; it < cfg.newton_iters && f2 > 1e-28; ++it) {
      // Gauss-Newton on the full gradient as a function of span coordinates;
      // columns of the Jacobian by central differences along the directions.
      std::vector<FsVector> cols(k);
      double h = std::max(h0, 1e-9 * (1.0 + std::sqrt(norm_sq(seed))));
      bool fd_ok = true;
      for (int j = 0; j < k && fd_ok; ++j) {
        std::vector<double> cp = c, cm = c;
        cp[j] += h;
        cm[j] -= h;
        std::optional<FsVector> gp = grad_at(cp), gm = grad_at(cm);
        if (!gp || !gm) {
          fd_ok = false;
          break;
        }
        cols[j] = (*gp - *gm) * (0.5 / h);
      }
      if (!fd_ok) break;
      std::vector<double> jtj(k * k), jtg(k);
      for (int i = 0; i < k; ++i) {
        jtg[i] = inner(cols[i], g);
        for (int j = i; j < k; ++j)
          jtj[i * k + j] = jtj[j * k + i] = inner(cols[i], cols[j]);
      }
      double trace = 0.0;
      for (int i = 0; i < k; ++i) trace += jtj[i * k + i];
      std::vector<double> step =
          solve_spd(jtj, jtg, 1e-12 * (trace + 1.0));
      if (step.empty()) break;
      double scale = 1.0;
      bool moved = false;
      for (int half = 0; half < 14; ++half) {
        std::vector<double> cand = c;
        for (int j = 0; j < k; ++j) cand[j] -= scale * step[j];
        std::optional<FsVector> gc = grad_at(cand);
        if (gc) {
          double fc = norm_sq(*gc);
          if (fc < f2) {
            c = std::move(cand);
            g = std::move(*gc);
            f2 = fc;
            moved = true;
            break;
          }
        }
        scale *= 0.5;
      }
      if (!moved) break;
    }
    if (std::sqrt(f2) > cfg.grad_floor) continue;
    FsVector x = span.point(c);
    if (region && !region(x)) continue;
    bool dup = false;
    for (const FsVector& p : found)
      if (dist(p, x) <= cfg.dedupe_tol) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(std::move(x));
  }
  return found;
}

// ---------------------------------------------------------------------------
// The containment induction

namespace {

// Critical search over one induction step. Raw seeds (lens midpoints toward
// each overlapping ball, earlier critical points in reach, random points in
// the overlap span) are grouped by the set of balls containing them; each
// group is refined inside the affine span of its own ball centers, which is
// where the confinement result places the critical points of that cell.
std::vector<FsVector> search_step_criticals(
    const ScalarField& field, int k, const std::vector<int>& overlap,
    const std::function<bool(const FsVector&)>& region,
    const CriticalAtlas& atlas, const CriticalConfig& cfg,
    int& truncated_counter) {
  const CoverPlan& plan = field.plan();
  const FsVector& yk = plan.centers[k];
  const double rk = plan.radii[k];

  std::vector<FsVector> raw;
  for (int i : overlap) {
    double d = dist(yk, plan.centers[i]);
    if (d <= 0.0) continue;
    double lo = std::max(0.0, d - plan.radii[i]);
    double reach = 0.5 * (lo + std::min(rk, d));
    FsVector dir = plan.centers[i] - yk;
    raw.push_back(axpy(reach / d, dir, yk));
  }
  for (const AtlasStep& st : atlas.steps)
    for (const FsVector& p : st.k_points)
      if (dist(p, yk) < rk + plan.radii[st.index]) raw.push_back(p);

  // Random points: sample the span of all overlapping centers (the largest
  // space the step's critical points can occupy).
  std::vector<FsVector> all_pts{yk};
  for (int i : overlap) all_pts.push_back(plan.centers[i]);
  AffineSpan wide = affine_span(all_pts);
  std::mt19937_64 rng(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(k));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int want = cfg.seeds_per_region;
  for (int tries = 0; tries < 30 * cfg.seeds_per_region && want > 0; ++tries) {
    std::vector<double> c(wide.dim());
    double s2 = 0.0;
    for (auto& v : c) {
      v = u(rng) * rk;
      s2 += v * v;
    }
    if (s2 > rk * rk) continue;
    FsVector x = wide.point(c);
    if (!plan.in_ball(k, x)) continue;
    bool earlier = false;
    for (int i : overlap)
      if (plan.in_ball(i, x)) {
        earlier = true;
        break;
      }
    if (!earlier) continue;
    raw.push_back(std::move(x));
    --want;
  }

  // Group by membership pattern; search each pattern's own span.
  std::map<std::vector<int>, std::vector<FsVector>> groups;
  for (FsVector& x : raw) {
    std::vector<int> pattern;
    for (int i : overlap)
      if (plan.in_ball(i, x)) pattern.push_back(i);
    if (pattern.empty()) continue;
    pattern.push_back(k);
    if (static_cast<int>(pattern.size()) > cfg.span_dim_cap) {
      ++truncated_counter;
      std::sort(pattern.begin(), pattern.end(), [&](int a, int b) {
        return dist_sq(x, plan.centers[a]) < dist_sq(x, plan.centers[b]);
      });
      pattern.resize(cfg.span_dim_cap);
      std::sort(pattern.begin(), pattern.end());
    }
    groups[pattern].push_back(std::move(x));
  }

  std::vector<FsVector> found;
  for (auto& [pattern, seeds] : groups) {
    std::vector<FsVector> pts;
    for (int i : pattern) pts.push_back(plan.centers[i]);
    AffineSpan span = affine_span(pts);
    for (FsVector& s : seeds) s = span.project(s);
    std::vector<FsVector> got =
        find_critical_in_span(field, k + 1, span, seeds, region, cfg);
    for (FsVector& x : got) {
      bool dup = false;
      for (const FsVector& p : found)
        if (dist(p, x) <= cfg.dedupe_tol) {
          dup = true;
          break;
        }
      if (!dup) found.push_back(std::move(x));
    }
  }
  return found;
}

}  // namespace

CriticalAtlas theorem3_induct(ScalarField& field, const CriticalConfig& cfg) {
  CriticalAtlas atlas;
  CoverPlan& plan = field.plan();
  const int n = plan.size();
  if (n == 0) throw Error("theorem3_induct: empty plan");

  // First step: the only critical point of f_1 in B_0 is the center.
  AtlasStep first;
  first.index = 0;
  first.mu_next = 0.5;
  first.k_points.push_back(plan.centers[0]);
  first.covering_radius = 10.0 * cfg.dedupe_tol;
  atlas.steps.push_back(first);

  for (int k = 1; k < n; ++k) {
    AtlasStep st;
    st.index = k;
    const double mu_k = atlas.steps[k - 1].mu_next;
    // Room between consecutive harmonic floors; the ladder advances by
    // fractions of this, so levels rise like 1 - O(1/k) rather than
    // collapsing geometrically onto 1.
    const double gap = 1.0 / (static_cast<double>(k + 1) * (k + 2));

    // lambda_k in (mu_k, 1), above the floor 1 - 1/(k+1). The increment is
    // capped by the remaining headroom so a data-driven jump of mu never
    // pushes the ladder past 1.
    st.lambda = std::max(1.0 - 0.9 / (k + 1),
                         mu_k + std::min(0.25 * gap, 0.05 * (1.0 - mu_k)));
    if (!(st.lambda < 1.0))
      throw MuSelectionFailure("theorem3_induct: lambda ladder exhausted");
    plan.lambda[k] = st.lambda;
    st.nu = 0.5 * (mu_k + st.lambda);

    // Critical points of f_(k+1) in B_k cap (earlier balls): confined to the
    // span of y_k and the overlapping centers.
    std::vector<int> overlap;
    for (int i = 0; i < k; ++i)
      if (dist(plan.centers[i], plan.centers[k]) <
          plan.radii[i] + plan.radii[k])
        overlap.push_back(i);
    std::vector<FsVector> criticals;
    if (!overlap.empty()) {
      auto region = [&](const FsVector& x) {
        if (!plan.in_scalloped_tol(k, x, 1e-9)) return false;
        for (int i : overlap)
          if (plan.in_scalloped_tol(i, x, 1e-9)) return true;
        return false;
      };
      criticals = search_step_criticals(field, k, overlap, region, atlas, cfg,
                                        atlas.truncated_overlap_families);
    }

    // mu_{k+1}: push the containment factor past every found critical point.
    double data = 0.0;
    const FsVector* worst = nullptr;
    for (const FsVector& x : criticals) {
      double best = 1.0;
      for (int i = 0; i < k; ++i) {
        double ratio = dist(x, plan.centers[i]) / plan.radii[i];
        if (ratio < 1.0) best = std::min(best, ratio);
      }
      if (best > data) {
        data = best;
        worst = &x;
      }
    }
    double cand = data + cfg.mu_margin;
    if (cand >= 1.0) cand = data + 0.5 * (1.0 - data);
    st.mu_next = std::max(st.lambda + 0.25 * gap, cand);
    if (1.0 - st.mu_next < 1e-6) {
      std::string detail = " (critical points hug a sphere";
      if (worst) {
        detail += "; worst point " + worst->to_text() + " ratio " +
                  std::to_string(data) + ", |grad| " +
                  std::to_string(
                      norm(field.gradient_truncated(*worst, k + 1)));
      }
      throw MuSelectionFailure(
          "theorem3_induct: containment factor margin collapsed at ball " +
          std::to_string(k) + detail + ")");
    }

    // Isolated center: y_k outside every earlier scalloped ball gets its own
    // delta ball and joins K_k.
    bool isolated = true;
    for (int i = 0; i < k && isolated; ++i)
      if (plan.in_scalloped(i, plan.centers[k])) isolated = false;
    if (isolated) {
      double gap = st.mu_next * plan.radii[k];
      for (int i = 0; i < k; ++i)
        gap = std::min(gap,
                       dist(plan.centers[k], plan.centers[i]) - plan.radii[i]);
      if (!(gap > 0.0))
        throw MuSelectionFailure(
            "theorem3_induct: no room for the isolated-center ball at " +
            std::to_string(k));
      st.has_delta = true;
      st.delta = 0.5 * gap;
      criticals.push_back(plan.centers[k]);
    }

    st.k_points = std::move(criticals);
    st.covering_radius = 10.0 * cfg.dedupe_tol;
    atlas.steps.push_back(std::move(st));
  }

  // Structural verification: orderings and K inside U.
  for (int k = 1; k < n; ++k) {
    const AtlasStep& st = atlas.steps[k];
    double mu_k = atlas.steps[k - 1].mu_next;
    if (!(mu_k < st.nu && st.nu < st.lambda && st.lambda < st.mu_next))
      throw MuSelectionFailure("theorem3_induct: ladder ordering broken at " +
                               std::to_string(k));
    if (!(st.lambda > 1.0 - 1.0 / (k + 1)))
      throw MuSelectionFailure("theorem3_induct: lambda floor broken");
  }
  for (int k = 0; k < n; ++k)
    for (const FsVector& p : atlas.steps[k].k_points) {
      if (!atlas.u_contains(plan, k, p))
        throw MuSelectionFailure(
            "theorem3_induct: K point escaped its U region at ball " +
            std::to_string(k));
      if (dist(p, plan.centers[k]) >= plan.radii[k] + 1e-12)
        throw MuSelectionFailure("theorem3_induct: U region left its ball");
    }
  return atlas;
}

// ---------------------------------------------------------------------------
// Confinement checks

ConfinementReport span_confinement_check(const ScalarField& field, int n,
                                         const std::vector<int>& excluded,
                                         const std::vector<FsVector>& samples,
                                         double off_span_dist,
                                         double grad_floor) {
  const CoverPlan& plan = field.plan();
  std::vector<char> is_excluded(n + 1, 0);
  for (int j : excluded) is_excluded[j] = 1;
  std::vector<FsVector> pts;
  for (int i = 0; i <= n; ++i)
    if (!is_excluded[i]) pts.push_back(plan.centers[i]);
  AffineSpan span = affine_span(pts);

  ConfinementReport rep;
  for (const FsVector& x : samples) {
    if (!plan.in_scalloped(n, x)) continue;
    bool skip = false;
    for (int j : excluded)
      if (plan.in_scalloped(j, x)) skip = true;
    if (skip) continue;
    ++rep.points_checked;
    if (dist_to_span(x, span) <= off_span_dist) continue;
    ++rep.off_span_points;
    double g = norm(field.gradient_truncated(x, n + 1));
    rep.min_off_span_grad = std::min(rep.min_off_span_grad, g);
    if (g <= grad_floor) {
      rep.pass = false;
      throw ConfinementViolation(
          "span_confinement_check: off-span point with vanishing gradient");
    }
  }
  return rep;
}

ConfinementReport confinement_sweep(const ScalarField& field,
                                    const std::vector<FsVector>& samples,
                                    const std::vector<int>& truncations,
                                    double off_span_dist, double grad_floor) {
  const CoverPlan& plan = field.plan();
  ConfinementReport rep;
  for (const FsVector& x : samples) {
    std::vector<int> active = plan.active_set(x);
    if (active.empty()) continue;
    for (int upto : truncations) {
      std::vector<FsVector> pts;
      for (int i : active)
        if (i < upto) pts.push_back(plan.centers[i]);
      if (pts.empty()) continue;
      AffineSpan span = affine_span(pts);
      ++rep.points_checked;
      if (dist_to_span(x, span) <= off_span_dist) continue;
      ++rep.off_span_points;
      double g = norm(field.gradient_truncated(x, upto));
      rep.min_off_span_grad = std::min(rep.min_off_span_grad, g);
      if (g <= grad_floor) {
        rep.pass = false;
        throw ConfinementViolation(
            "confinement_sweep: off-span point with vanishing gradient");
      }
    }
  }
  return rep;
}

LocalityResult locality_partition(const CriticalAtlas& atlas,
                                  const CoverPlan& plan, const FsVector& x) {
  LocalityResult out;
  int inside = -1;
  for (std::size_t k = 0; k < atlas.steps.size(); ++k) {
    if (atlas.u_contains(plan, static_cast<int>(k), x)) {
      if (inside >= 0) {
        out.kind = LocalityResult::Kind::Invalid;  // disjointness broken
        return out;
      }
      inside = static_cast<int>(k);
    }
  }
  if (inside >= 0) {
    out.kind = LocalityResult::Kind::InsideU;
    out.n = inside;
    return out;
  }
  double radius = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < atlas.steps.size(); ++k)
    radius = std::min(
        radius, atlas.u_dist_lower_bound(plan, static_cast<int>(k), x));
  if (radius > 0.0) {
    out.kind = LocalityResult::Kind::DisjointBall;
    out.ball_radius = radius;
  }
  return out;
}

}  // namespace scallop
