#include "scallop/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scallop/errors.hpp"
#include "scallop/independence.hpp"
#include "scallop/report.hpp"

namespace scallop {

// ---------------------------------------------------------------------------
// CellIndex

void CellIndex::build(const std::vector<FsVector>& centers,
                      const std::vector<double>& radii,
                      const std::vector<std::array<double, 2>>& box) {
  dim_ = static_cast<int>(box.size());
  count_ = centers.size();
  radius_ = radii;
  max_radius_ = 0.0;
  for (double r : radii) max_radius_ = std::max(max_radius_, r);
  cell_ = max_radius_ > 0.0 ? max_radius_ : 1.0;
  lo_.resize(dim_);
  ncells_.resize(dim_);
  for (int k = 0; k < dim_; ++k) {
    lo_[k] = box[k][0] - cell_;  // one pad cell on each side
    double width = box[k][1] - box[k][0] + 2.0 * cell_;
    ncells_[k] = std::max(1, static_cast<int>(std::ceil(width / cell_)) + 1);
  }
  std::size_t total = 1;
  for (int k = 0; k < dim_; ++k) total *= static_cast<std::size_t>(ncells_[k]);
  buckets_.assign(total, {});
  proj_.assign(count_ * dim_, 0.0);
  for (std::size_t j = 0; j < count_; ++j) {
    std::size_t linear = 0;
    for (int k = 0; k < dim_; ++k) {
      double c = centers[j].at(k + 1);
      proj_[j * dim_ + k] = c;
      int cell = static_cast<int>(std::floor((c - lo_[k]) / cell_));
      cell = std::clamp(cell, 0, ncells_[k] - 1);
      linear = linear * ncells_[k] + static_cast<std::size_t>(cell);
    }
    buckets_[linear].push_back(static_cast<int>(j));
  }
}

void CellIndex::query(const FsVector& x, double slack,
                      std::vector<int>& out) const {
  out.clear();
  if (count_ == 0) return;
  const double reach = max_radius_ + slack;
  const int ring = std::max(1, static_cast<int>(std::ceil(reach / cell_)));
  std::vector<double> xc(dim_);
  std::vector<int> base(dim_), lo(dim_), hi(dim_);
  for (int k = 0; k < dim_; ++k) {
    xc[k] = x.at(k + 1);
    base[k] = static_cast<int>(std::floor((xc[k] - lo_[k]) / cell_));
    lo[k] = std::clamp(base[k] - ring, 0, ncells_[k] - 1);
    hi[k] = std::clamp(base[k] + ring, 0, ncells_[k] - 1);
    if (base[k] + ring < 0 || base[k] - ring > ncells_[k] - 1) return;
  }
  std::vector<int> idx(lo);
  for (;;) {
    std::size_t linear = 0;
    for (int k = 0; k < dim_; ++k)
      linear = linear * ncells_[k] + static_cast<std::size_t>(idx[k]);
    for (int j : buckets_[linear]) {
      double d2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double d = xc[k] - proj_[static_cast<std::size_t>(j) * dim_ + k];
        d2 += d * d;
      }
      double reach_j = radius_[j] + slack;
      if (d2 < reach_j * reach_j) out.push_back(j);
    }
    int k = dim_ - 1;
    for (; k >= 0; --k) {
      if (++idx[k] <= hi[k]) break;
      idx[k] = lo[k];
    }
    if (k < 0) break;
  }
  std::sort(out.begin(), out.end());
}

// ---------------------------------------------------------------------------
// CoverPlan membership

std::vector<int> CoverPlan::ball_neighbors(const FsVector& x,
                                           double slack) const {
  std::vector<int> cand;
  index.query(x, slack, cand);
  std::vector<int> out;
  out.reserve(cand.size());
  for (int j : cand) {
    double d = dist(x, centers[j]);
    if (d < radii[j] + slack) out.push_back(j);
  }
  return out;
}

bool CoverPlan::in_ball(int k, const FsVector& x) const {
  return dist_sq(x, centers[k]) < radii[k] * radii[k];
}

bool CoverPlan::in_scalloped(int k, const FsVector& x) const {
  if (!in_ball(k, x)) return false;
  double lk = lambda[k];
  for (int j : ball_neighbors(x, 0.0)) {
    if (j >= k) break;
    if (dist(x, centers[j]) <= lk * radii[j]) return false;
  }
  return true;
}

bool CoverPlan::in_scalloped_tol(int k, const FsVector& x, double tol) const {
  if (dist(x, centers[k]) >= radii[k] + tol) return false;
  double lk = lambda[k];
  std::vector<int> cand;
  index.query(x, tol, cand);
  for (int j : cand) {
    if (j >= k) break;
    if (dist(x, centers[j]) <= lk * radii[j] - tol) return false;
  }
  return true;
}

std::vector<int> CoverPlan::active_set(const FsVector& x) const {
  std::vector<int> nb = ball_neighbors(x, 0.0);
  std::vector<double> d(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) d[i] = dist(x, centers[nb[i]]);
  std::vector<int> active;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    int k = nb[i];
    bool in = true;
    for (std::size_t j = 0; j < i && in; ++j)
      if (d[j] <= lambda[k] * radii[nb[j]]) in = false;
    if (in) active.push_back(k);
  }
  return active;
}

void CoverPlan::rebuild_index() { index.build(centers, radii, box); }

// ---------------------------------------------------------------------------
// Greedy cover

namespace {

// Ball radius seed at x: largest s whose modulus-certified oscillation over a
// radius-2s ball fits the accuracy budget. The factor-2 slack absorbs both
// the center jitter and the later radius move into [s, 1.5 s].
double seed_radius(const Evaluable& f, const EpsSpec& eps, const FsVector& x,
                   double s_max) {
  if (!f.modulus.valid())
    throw UsageError("build_cover: f needs a modulus-of-continuity hint");
  if (eps.is_constant) {
    return 0.5 * f.modulus.inverse(eps.constant / 4.0, 2.0 * s_max);
  }
  if (!eps.fn.modulus.valid())
    throw UsageError("build_cover: variable epsilon needs a modulus hint");
  double ex = eps.fn.f(x);
  if (!(ex > 0.0)) throw UsageError("build_cover: epsilon must be positive");
  // Tightened constants so the sampled certificates |f(y)-f(y_n)| <=
  // eps(y_n)/8 and eps(y_n) <= (4/3) eps(y) both close over the ball.
  double s_eps = eps.fn.modulus.inverse(ex / 8.0, 2.0 * s_max);
  double s_f = f.modulus.inverse(7.0 * ex / 64.0, 2.0 * s_max);
  return 0.5 * std::min(s_eps, s_f);
}

}  // namespace

GreedyCover greedy_cover(const Evaluable& f, const EpsSpec& eps,
                         const WorkingDomain& dom, const CoverConfig& cfg) {
  const std::size_t n_grid = dom.sample_grid.size();
  if (n_grid == 0) throw UsageError("greedy_cover: empty sample grid");
  const int d = dom.dim();
  const double s_max = 3.0 * dom.diameter();

  // Flatten grid coordinates once; the greedy pass is distance-heavy.
  std::vector<double> coords(n_grid * d);
  for (std::size_t i = 0; i < n_grid; ++i)
    for (int k = 0; k < d; ++k)
      coords[i * d + k] = dom.sample_grid[i].at(k + 1);

  // Visit order: shrinking epsilon first so large balls are placed first;
  // ties resolved by grid order for determinism.
  std::vector<std::size_t> order(n_grid);
  std::iota(order.begin(), order.end(), 0);
  if (!eps.is_constant) {
    std::vector<double> ex(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) ex[i] = eps.at(dom.sample_grid[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ex[a] > ex[b]; });
  }

  GreedyCover out;
  std::vector<char> covered(n_grid, 0);
  for (std::size_t oi = 0; oi < n_grid; ++oi) {
    std::size_t i = order[oi];
    if (covered[i]) continue;
    const FsVector& p = dom.sample_grid[i];
    double s = seed_radius(f, eps, p, s_max);
    if (!(s > 0.0)) throw CoverBudgetExceeded("greedy_cover: zero seed radius");
    if (static_cast<int>(out.centers.size()) >= cfg.n_max)
      throw CoverBudgetExceeded(
          "greedy_cover: ball budget n_max=" + std::to_string(cfg.n_max) +
          " exhausted; epsilon too small for this grid");
    out.centers.push_back(p);
    out.raw_radii.push_back(s);
    const double reach = cfg.greedy_fraction * s;
    const double reach2 = reach * reach;
    for (std::size_t q = 0; q < n_grid; ++q) {
      if (covered[q]) continue;
      double d2 = 0.0;
      for (int k = 0; k < d; ++k) {
        double dd = coords[q * d + k] - coords[i * d + k];
        d2 += dd * dd;
      }
      if (d2 <= reach2) covered[q] = 1;
    }
  }
  return out;
}

CoverPlan finalize_cover(const GreedyCover& greedy,
                         std::vector<FsVector> perturbed_centers,
                         const Evaluable& f, const EpsSpec& eps,
                         const WorkingDomain& dom) {
  const std::size_t n = greedy.centers.size();
  if (perturbed_centers.size() != n)
    throw Error("finalize_cover: center count mismatch");
  CoverPlan plan;
  plan.dim = dom.dim();
  plan.box = dom.box;
  plan.centers = std::move(perturbed_centers);
  plan.raw_radii = greedy.raw_radii;
  plan.radii = greedy.raw_radii;  // select_radii later moves into [s, 1.5 s]
  plan.variable_eps = !eps.is_constant;
  plan.lambda.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k)
    plan.lambda[k] = 1.0 - 1.0 / (2.0 * (static_cast<double>(k) + 1.0));
  plan.rebuild_index();

  plan.osc_cert.assign(n, 0.0);
  plan.eps_at_center.assign(n, 0.0);
  std::vector<double> min_eps_in_ball(n,
                                      std::numeric_limits<double>::infinity());
  std::vector<double> fy(n);
  for (std::size_t k = 0; k < n; ++k) {
    fy[k] = f.f(plan.centers[k]);
    plan.eps_at_center[k] = eps.at(plan.centers[k]);
  }
  for (const FsVector& q : dom.sample_grid) {
    double fq = f.f(q);
    double eq = plan.variable_eps ? eps.at(q) : 0.0;
    std::vector<int> cand;
    plan.index.query(q, 0.75 * plan.index_slack(), cand);
    for (int k : cand) {
      double reach = 1.5 * plan.raw_radii[k];
      if (dist_sq(q, plan.centers[k]) > reach * reach) continue;
      plan.osc_cert[k] = std::max(plan.osc_cert[k], std::abs(fq - fy[k]));
      if (plan.variable_eps)
        min_eps_in_ball[k] = std::min(min_eps_in_ball[k], eq);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    double budget = plan.variable_eps ? plan.eps_at_center[k] / 8.0
                                      : eps.constant / 4.0;
    if (plan.osc_cert[k] > budget + 1e-12)
      throw Error("finalize_cover: oscillation certificate violated on ball " +
                  std::to_string(k) + " (" + std::to_string(plan.osc_cert[k]) +
                  " > " + std::to_string(budget) +
                  "); the modulus hint understates f");
    if (plan.variable_eps && min_eps_in_ball[k] <
                                 0.75 * plan.eps_at_center[k] - 1e-12)
      throw Error("finalize_cover: epsilon varies too fast on ball " +
                  std::to_string(k));
  }

  // Covering certificate: every grid point strictly inside some ball.
  for (const FsVector& q : dom.sample_grid) {
    bool hit = false;
    std::vector<int> cand;
    plan.index.query(q, 0.0, cand);
    for (int k : cand)
      if (plan.in_ball(k, q)) {
        hit = true;
        break;
      }
    if (!hit) throw Error("finalize_cover: grid point left uncovered");
  }
  return plan;
}

CoverPlan build_cover(const Evaluable& f, const EpsSpec& eps,
                      const WorkingDomain& dom, const CoverConfig& cfg) {
  GreedyCover greedy = greedy_cover(f, eps, dom, cfg);
  PerturbOptions opts;
  opts.seed = cfg.seed;
  opts.jitter_base = dom.jitter_base();
  std::vector<FsVector> moved =
      perturb_to_independent(greedy.centers, greedy.raw_radii, 1, opts);
  return finalize_cover(greedy, std::move(moved), f, eps, dom);
}

// ---------------------------------------------------------------------------
// Serialization

std::string CoverPlan::to_text() const {
  Report doc;
  doc.set("schema", "scallop-plan/1");
  doc.set("dim", dim);
  doc.set("variable_eps", variable_eps);
  doc.set("n", size());
  for (int k = 0; k < dim; ++k) {
    doc.set(Report::key("box", k, "lo"), box[k][0]);
    doc.set(Report::key("box", k, "hi"), box[k][1]);
  }
  for (int k = 0; k < size(); ++k) {
    std::string b = Report::key("ball", k, "");
    doc.set(b + "center", centers[k].to_text());
    doc.set(b + "s", raw_radii[k]);
    doc.set(b + "r", radii[k]);
    doc.set(b + "lambda", lambda[k]);
    doc.set(b + "osc_cert", osc_cert[k]);
    doc.set(b + "eps_at_center", eps_at_center[k]);
  }
  return doc.to_text();
}

CoverPlan CoverPlan::from_text(const std::string& text) {
  Report doc = Report::from_text(text);
  if (doc.get_string("schema") != "scallop-plan/1")
    throw Error("CoverPlan::from_text: unknown schema");
  CoverPlan plan;
  plan.dim = doc.get_int("dim");
  plan.variable_eps = doc.get_bool("variable_eps");
  int n = doc.get_int("n");
  plan.box.resize(plan.dim);
  for (int k = 0; k < plan.dim; ++k) {
    plan.box[k][0] = doc.get_double(Report::key("box", k, "lo"));
    plan.box[k][1] = doc.get_double(Report::key("box", k, "hi"));
  }
  for (int k = 0; k < n; ++k) {
    std::string b = Report::key("ball", k, "");
    plan.centers.push_back(FsVector::parse(doc.get_string(b + "center")));
    plan.raw_radii.push_back(doc.get_double(b + "s"));
    plan.radii.push_back(doc.get_double(b + "r"));
    plan.lambda.push_back(doc.get_double(b + "lambda"));
    plan.osc_cert.push_back(doc.get_double(b + "osc_cert"));
    plan.eps_at_center.push_back(doc.get_double(b + "eps_at_center"));
  }
  plan.rebuild_index();
  return plan;
}

double CoverPlan::index_slack() const {
  double m = 0.0;
  for (double s : raw_radii) m = std::max(m, s);
  return m;
}

}  // namespace scallop
