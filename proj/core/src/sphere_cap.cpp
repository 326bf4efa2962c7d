#include "scallop/sphere_cap.hpp"

#include <algorithm>
#include <cmath>

#include "scallop/errors.hpp"

namespace scallop {

namespace {

// Row-echelon elimination of the (rows)x(cols) system [L | b] with partial
// pivoting. Returns pivot column per eliminated row; -1 rank-drop rows are
// compacted away.
struct Echelon {
  std::vector<double> m;  // row-major, cols+1 wide (augmented)
  int rows = 0, cols = 0;
  std::vector<int> pivot_col;
  bool inconsistent = false;
};

Echelon eliminate(std::vector<double> m, int rows, int cols, double tol) {
  Echelon e;
  e.cols = cols;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int best = -1;
    double best_abs = tol;
    for (int r = rank; r < rows; ++r) {
      double v = std::abs(m[r * (cols + 1) + col]);
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (best < 0) continue;
    for (int c = 0; c <= cols; ++c)
      std::swap(m[rank * (cols + 1) + c], m[best * (cols + 1) + c]);
    double piv = m[rank * (cols + 1) + col];
    for (int r = 0; r < rows; ++r) {
      if (r == rank) continue;
      double f = m[r * (cols + 1) + col] / piv;
      if (f == 0.0) continue;
      for (int c = col; c <= cols; ++c)
        m[r * (cols + 1) + c] -= f * m[rank * (cols + 1) + c];
    }
    e.pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (std::abs(m[r * (cols + 1) + cols]) > tol) e.inconsistent = true;
  e.m.assign(m.begin(), m.begin() + rank * (cols + 1));
  e.rows = rank;
  return e;
}

}  // namespace

SphereCapResult spheres_cap_span(std::span<const Sphere> spheres,
                                 const AffineSpan& a) {
  SphereCapResult out;
  const int k = a.dim();
  const int m = static_cast<int>(spheres.size());
  if (m == 0) throw Error("spheres_cap_span: need at least one sphere");

  std::vector<std::vector<double>> g(m);
  std::vector<double> q(m);
  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    FsVector rel = a.base - spheres[i].center;
    g[i].resize(k);
    for (int l = 0; l < k; ++l) g[i][l] = inner(rel, a.directions[l]);
    q[i] = norm_sq(rel) - spheres[i].radius * spheres[i].radius;
    scale = std::max({scale, std::abs(q[i]), norm_sq(rel),
                      spheres[i].radius * spheres[i].radius});
  }
  const double tol = 1e-10 * scale;

  // Solution flat of the pairwise-difference linear system: c = c0 + W t.
  std::vector<double> c0(k, 0.0);
  std::vector<std::vector<double>> basis;  // orthonormal basis of W
  if (m == 1) {
    basis.resize(k);
    for (int l = 0; l < k; ++l) {
      basis[l].assign(k, 0.0);
      basis[l][l] = 1.0;
    }
  } else {
    const int rows = m - 1;
    std::vector<double> sys(rows * (k + 1), 0.0);
    for (int i = 0; i < rows; ++i) {
      for (int l = 0; l < k; ++l)
        sys[i * (k + 1) + l] = 2.0 * (g[i][l] - g[m - 1][l]);
      sys[i * (k + 1) + k] = q[m - 1] - q[i];
    }
    Echelon e = eliminate(std::move(sys), rows, k, 1e-12 * (1.0 + scale));
    if (e.inconsistent) {
      out.kind = SphereCapResult::Kind::Empty;
      return out;
    }
    std::vector<char> is_pivot(k, 0);
    for (int r = 0; r < e.rows; ++r) {
      // Normalize the row so back-substitution is direct.
      int pc = e.pivot_col[r];
      double piv = e.m[r * (k + 1) + pc];
      c0[pc] = e.m[r * (k + 1) + k] / piv;
      is_pivot[pc] = 1;
    }
    for (int col = 0; col < k; ++col) {
      if (is_pivot[col]) continue;
      std::vector<double> v(k, 0.0);
      v[col] = 1.0;
      for (int r = 0; r < e.rows; ++r) {
        int pc = e.pivot_col[r];
        v[pc] = -e.m[r * (k + 1) + col] / e.m[r * (k + 1) + pc];
      }
      // Gram-Schmidt against the basis collected so far.
      for (const auto& b : basis) {
        double dot = 0.0;
        for (int l = 0; l < k; ++l) dot += v[l] * b[l];
        for (int l = 0; l < k; ++l) v[l] -= dot * b[l];
      }
      double nrm = 0.0;
      for (double x : v) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm > 1e-14) {
        for (double& x : v) x /= nrm;
        basis.push_back(std::move(v));
      }
    }
  }

  // Remaining quadratic from the last sphere on the flat c0 + W t:
  // f(t) = ||c0 + Wt||^2 + 2 g.(c0 + Wt) + q, with W orthonormal.
  const auto& gm = g[m - 1];
  double f0 = q[m - 1];
  std::vector<double> h(k);  // c0 + gm
  for (int l = 0; l < k; ++l) {
    f0 += c0[l] * (c0[l] + 2.0 * gm[l]);
    h[l] = c0[l] + gm[l];
  }
  const int free_dim = static_cast<int>(basis.size());
  std::vector<double> proj(free_dim, 0.0);  // W^T (c0 + gm)
  double proj_sq = 0.0;
  for (int a_i = 0; a_i < free_dim; ++a_i) {
    for (int l = 0; l < k; ++l) proj[a_i] += basis[a_i][l] * h[l];
    proj_sq += proj[a_i] * proj[a_i];
  }
  auto emit = [&](std::span<const double> t) {
    std::vector<double> c(c0);
    for (int a_i = 0; a_i < free_dim; ++a_i)
      for (int l = 0; l < k; ++l) c[l] += t[a_i] * basis[a_i][l];
    out.points.push_back(a.point(c));
  };

  const double fmin = f0 - proj_sq;  // minimum of f over the flat
  if (free_dim == 0) {
    if (std::abs(f0) <= tol) {
      out.kind = SphereCapResult::Kind::Points;
      emit({});
    } else {
      out.kind = SphereCapResult::Kind::Empty;
    }
    return out;
  }
  if (fmin > tol) {
    out.kind = SphereCapResult::Kind::Empty;
    return out;
  }
  if (free_dim == 1) {
    // f(t) = t^2 + 2 proj[0] t + f0; roots are real here.
    double disc = proj[0] * proj[0] - f0;
    if (disc < 0.0) disc = 0.0;
    double sq = std::sqrt(disc);
    out.kind = SphereCapResult::Kind::Points;
    double t1 = -proj[0] - sq, t2 = -proj[0] + sq;
    emit(std::span<const double>(&t1, 1));
    if (sq > tol) emit(std::span<const double>(&t2, 1));
    return out;
  }
  // free_dim >= 2: either a tangency point or a positive-dimensional sphere.
  if (std::abs(fmin) <= tol) {
    out.kind = SphereCapResult::Kind::Points;
    std::vector<double> t(free_dim);
    for (int a_i = 0; a_i < free_dim; ++a_i) t[a_i] = -proj[a_i];
    emit(t);
    return out;
  }
  out.kind = SphereCapResult::Kind::Degenerate;
  return out;
}

// ---------------------------------------------------------------------------
// Radius selection

namespace {

struct FamilyContext {
  const CoverPlan* plan;
  int target;                  // ball whose radius is being chosen/verified
  std::vector<int> candidates; // spheres that can reach the target window
  std::vector<std::vector<char>> adj;  // pairwise intersectability
};

// Spheres S_i, S_j can meet only when | r_i - r_j | <= d <= r_i + r_j.
bool spheres_can_meet(const CoverPlan& plan, int i, int j, double margin) {
  double d = dist(plan.centers[i], plan.centers[j]);
  return d <= plan.radii[i] + plan.radii[j] + margin &&
         d + margin >= std::abs(plan.radii[i] - plan.radii[j]);
}

FamilyContext gather_candidates(const CoverPlan& plan, int target,
                                double window_hi, bool chosen_only,
                                int max_candidates) {
  FamilyContext ctx;
  ctx.plan = &plan;
  ctx.target = target;
  const double margin = 1e-9 + 0.01 * window_hi;
  std::vector<std::pair<double, int>> near;
  for (int j = 0; j < plan.size(); ++j) {
    if (j == target) continue;
    if (chosen_only && j > target) continue;
    double d = dist(plan.centers[target], plan.centers[j]);
    if (d <= plan.radii[j] + window_hi + margin &&
        d + window_hi + margin >= plan.radii[j])
      near.push_back({d, j});
  }
  std::sort(near.begin(), near.end());
  if (static_cast<int>(near.size()) > max_candidates)
    near.resize(max_candidates);
  for (auto& [d, j] : near) ctx.candidates.push_back(j);
  std::sort(ctx.candidates.begin(), ctx.candidates.end());
  const int c = static_cast<int>(ctx.candidates.size());
  ctx.adj.assign(c, std::vector<char>(c, 0));
  for (int a = 0; a < c; ++a)
    for (int b = a + 1; b < c; ++b)
      ctx.adj[a][b] = ctx.adj[b][a] =
          spheres_can_meet(plan, ctx.candidates[a], ctx.candidates[b], margin);
  return ctx;
}

// Enumerates cliques (by candidate position) up to size cap, calling visit on
// each nonempty clique.
void enumerate_cliques(const FamilyContext& ctx, int cap,
                       const std::function<void(const std::vector<int>&)>& visit) {
  const int c = static_cast<int>(ctx.candidates.size());
  std::vector<int> clique;
  std::function<void(int)> extend = [&](int start) {
    if (!clique.empty()) visit(clique);
    if (static_cast<int>(clique.size()) >= cap) return;
    for (int p = start; p < c; ++p) {
      bool ok = true;
      for (int q : clique)
        if (!ctx.adj[q][p]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      clique.push_back(p);
      extend(p + 1);
      clique.pop_back();
    }
  };
  extend(0);
}

}  // namespace

void select_radii(CoverPlan& plan, const RadiiConfig& cfg) {
  const int n = plan.size();
  for (int k = 0; k < n; ++k) {
    const double s = plan.raw_radii[k];
    const double lo = s, hi = 1.5 * s;
    std::vector<double> excluded;

    // Centers may not land on the new sphere (either role of Lemma (ii)).
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      double d = dist(plan.centers[k], plan.centers[j]);
      if (d >= lo - 1e-12 && d <= hi + 1e-12) excluded.push_back(d);
    }

    // Norms of the intersection points of already-chosen sphere families
    // with the span of the family plus the new center.
    FamilyContext ctx = gather_candidates(plan, k, hi, /*chosen_only=*/true, 40);
    enumerate_cliques(ctx, cfg.family_cap, [&](const std::vector<int>& clique) {
      std::vector<FsVector> pts;
      pts.push_back(plan.centers[k]);
      std::vector<Sphere> spheres;
      for (int p : clique) {
        int j = ctx.candidates[p];
        pts.push_back(plan.centers[j]);
        spheres.push_back({plan.centers[j], plan.radii[j]});
      }
      AffineSpan a = affine_span(pts);
      SphereCapResult cap = spheres_cap_span(spheres, a);
      if (cap.kind != SphereCapResult::Kind::Points) return;
      for (const FsVector& p : cap.points) {
        double d = dist(p, plan.centers[k]);
        if (d >= lo - 1e-12 && d <= hi + 1e-12) excluded.push_back(d);
      }
    });

    std::sort(excluded.begin(), excluded.end());
    double best_lo = lo, best_gap = -1.0, prev = lo;
    for (double e : excluded) {
      if (e - prev > best_gap) {
        best_gap = e - prev;
        best_lo = prev;
      }
      prev = std::max(prev, e);
    }
    if (hi - prev > best_gap) {
      best_gap = hi - prev;
      best_lo = prev;
    }
    if (best_gap < 1e-9 * std::min(1.0, s))
      throw RadiusSelectionExhausted(
          "select_radii: no admissible gap for ball " + std::to_string(k));
    plan.radii[k] = best_lo + 0.5 * best_gap;
  }
  plan.rebuild_index();
}

TransversalityReport verify_sphere_transversality(const CoverPlan& plan,
                                                  const RadiiConfig& cfg) {
  TransversalityReport rep;
  const int n = plan.size();
  for (int k = 0; k < n; ++k) {
    // Lemma (ii): centers stay off sphere k.
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      double res = std::abs(dist(plan.centers[j], plan.centers[k]) -
                            plan.radii[k]);
      rep.min_residual = std::min(rep.min_residual, res);
    }
    // Lemma (i): families with k as the largest index.
    FamilyContext ctx =
        gather_candidates(plan, k, plan.radii[k], /*chosen_only=*/true, 40);
    enumerate_cliques(ctx, cfg.family_cap, [&](const std::vector<int>& clique) {
      // Family members must also pairwise reach sphere k.
      std::vector<FsVector> pts;
      pts.push_back(plan.centers[k]);
      std::vector<Sphere> spheres;
      for (int p : clique) {
        int j = ctx.candidates[p];
        pts.push_back(plan.centers[j]);
        spheres.push_back({plan.centers[j], plan.radii[j]});
      }
      AffineSpan a = affine_span(pts);
      SphereCapResult cap = spheres_cap_span(spheres, a);
      ++rep.families_checked;
      if (cap.kind == SphereCapResult::Kind::Degenerate) {
        ++rep.degenerate_families;
        return;
      }
      if (cap.kind != SphereCapResult::Kind::Points) return;
      for (const FsVector& p : cap.points) {
        double res = std::abs(dist(p, plan.centers[k]) - plan.radii[k]);
        rep.min_residual = std::min(rep.min_residual, res);
      }
    });
  }
  rep.pass = rep.min_residual > cfg.residual_floor;
  return rep;
}

}  // namespace scallop
