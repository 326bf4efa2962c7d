#include "scallop/approximant.hpp"

#include <algorithm>
#include <cmath>

#include "scallop/errors.hpp"
#include "scallop/independence.hpp"
#include "scallop/sphere_cap.hpp"

namespace scallop {

FsVector GradientDecomposition::reconstruct(
    const FsVector& x, const std::vector<FsVector>& centers) const {
  double coeff_x = 0.0;
  FsVector acc;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    double c = betas[i] / denominator;
    if (c == 0.0) continue;
    coeff_x += c;
    acc = axpy(-c, centers[indices[i]], acc);
  }
  return axpy(coeff_x, x, acc);
}

ScalarField::ScalarField(CoverPlan plan, const Evaluable& f,
                         const EpsSpec& eps)
    : plan_(std::move(plan)) {
  alphas_.reserve(plan_.size());
  for (int k = 0; k < plan_.size(); ++k) {
    double fy = f.f(plan_.centers[k]);
    double amp = (eps.is_constant ? eps.constant : plan_.eps_at_center[k]) / 4.0;
    alphas_.push_back(SmoothProfile::make_alpha(fy, amp));
  }
}

SmoothProfile ScalarField::gate(int k, int j) const {
  double rj = plan_.radii[j];
  double lo = plan_.lambda[k] * rj;
  return SmoothProfile::make_inner(lo * lo, rj * rj);
}

ProductGadget ScalarField::gadget(int k) const {
  ProductGadget g;
  for (int j = 0; j < k; ++j) g.factors.push_back(gate(k, j));
  g.factors.push_back(SmoothProfile::make_outer(plan_.radii[k]));
  return g;
}

LocalState ScalarField::analyze(const FsVector& x, int upto) const {
  const int n = upto < 0 ? plan_.size() : std::min(upto, plan_.size());
  LocalState st;
  std::vector<int> cand;
  plan_.index.query(x, 0.0, cand);
  for (int j : cand) {
    if (j >= n) continue;
    double t = dist_sq(x, plan_.centers[j]);
    if (t < plan_.radii[j] * plan_.radii[j]) {
      st.nb.push_back(j);
      st.t.push_back(t);
    }
  }
  const std::size_t a = st.nb.size();
  st.active.assign(a, 1);
  st.phi.assign(a, 0.0);
  st.alpha.assign(a, 0.0);
  for (std::size_t i = 0; i < a; ++i) {
    int k = st.nb[i];
    double lk = plan_.lambda[k];
    for (std::size_t j = 0; j < i; ++j) {
      double hole = lk * plan_.radii[st.nb[j]];
      if (st.t[j] <= hole * hole) {
        st.active[i] = 0;
        break;
      }
    }
    st.alpha[i] = alphas_[k].value(st.t[i]);
    if (!st.active[i]) continue;
    double rk = plan_.radii[k];
    double phi = step_down(0.0, rk * rk, st.t[i]);
    for (std::size_t j = 0; j < i && phi != 0.0; ++j) {
      double rj = plan_.radii[st.nb[j]];
      double hole = lk * rj;
      phi *= 1.0 - step_down(hole * hole, rj * rj, st.t[j]);
    }
    st.phi[i] = phi;
    st.S += phi;
    st.T += st.alpha[i] * phi;
  }
  return st;
}

double ScalarField::value(const FsVector& x) const {
  return value_truncated(x, -1);
}

double ScalarField::value_truncated(const FsVector& x, int upto) const {
  LocalState st = analyze(x, upto);
  if (!st.covered())
    throw OutsideCover("ScalarField::value: point not covered by any ball");
  return st.T / st.S;
}

std::optional<double> ScalarField::try_value(const FsVector& x) const {
  LocalState st = analyze(x, -1);
  if (!st.covered()) return std::nullopt;
  return st.T / st.S;
}

double ScalarField::alpha_value(int k, const FsVector& x) const {
  return alphas_[k].value(dist_sq(x, plan_.centers[k]));
}

int ScalarField::locality_index(const FsVector& x) const {
  std::vector<int> cand;
  plan_.index.query(x, 1e-9, cand);
  int last = 0;
  for (int j : cand) {
    double r = plan_.radii[j];
    if (dist_sq(x, plan_.centers[j]) <= r * r) last = std::max(last, j + 1);
  }
  return std::max(last, 1);
}

// Shared innards of the two gradient routes: per-neighbor eta, per-active-k
// factor tables and mu values.
struct ScalarField::GradTerms {
  // mu[k-entry][j-entry] stored flat as triples.
  std::vector<GradientDecomposition::MuEntry> mus;  // indices into nb
  std::vector<double> eta;                          // per nb entry
};

ScalarField::GradTerms ScalarField::grad_terms(const LocalState& st) const {
  GradTerms gt;
  const std::size_t a = st.nb.size();
  gt.eta.resize(a);
  for (std::size_t i = 0; i < a; ++i)
    gt.eta[i] = alphas_[st.nb[i]].deriv(st.t[i]);
  // Gate tables per active k: factors are (j < k in nb) gates + outer k.
  std::vector<double> val, der;
  for (std::size_t i = 0; i < a; ++i) {
    if (!st.active[i]) continue;
    int k = st.nb[i];
    double lk = plan_.lambda[k];
    const std::size_t cnt = i + 1;  // factors for nb[0..i]
    val.assign(cnt, 1.0);
    der.assign(cnt, 0.0);
    for (std::size_t j = 0; j < i; ++j) {
      double rj = plan_.radii[st.nb[j]];
      double hole = lk * rj;
      val[j] = 1.0 - step_down(hole * hole, rj * rj, st.t[j]);
      der[j] = -step_down_deriv(hole * hole, rj * rj, st.t[j]);
    }
    double rk = plan_.radii[k];
    val[i] = step_down(0.0, rk * rk, st.t[i]);
    der[i] = step_down_deriv(0.0, rk * rk, st.t[i]);
    // Prefix/suffix products give all partials of the product in O(cnt).
    std::vector<double> prefix(cnt + 1, 1.0), suffix(cnt + 1, 1.0);
    for (std::size_t j = 0; j < cnt; ++j) prefix[j + 1] = prefix[j] * val[j];
    for (std::size_t j = cnt; j-- > 0;) suffix[j] = suffix[j + 1] * val[j];
    for (std::size_t j = 0; j < cnt; ++j) {
      if (der[j] == 0.0) continue;
      double mu = der[j] * prefix[j] * suffix[j + 1];
      if (mu != 0.0)
        gt.mus.push_back({static_cast<int>(i), static_cast<int>(j), mu});
    }
  }
  return gt;
}

FsVector ScalarField::gradient(const FsVector& x) const {
  return gradient_truncated(x, -1);
}

std::optional<FsVector> ScalarField::try_gradient_truncated(const FsVector& x,
                                                            int upto) const {
  LocalState st = analyze(x, upto);
  if (!st.covered()) return std::nullopt;
  return gradient_from_state(x, st);
}

FsVector ScalarField::gradient_truncated(const FsVector& x, int upto) const {
  LocalState st = analyze(x, upto);
  if (!st.covered())
    throw OutsideCover("ScalarField::gradient: point not covered");
  return gradient_from_state(x, st);
}

FsVector ScalarField::gradient_from_state(const FsVector& x,
                                          const LocalState& st) const {
  GradTerms gt = grad_terms(st);
  const std::size_t a = st.nb.size();
  // Quotient rule: coefficient of (x - y_j) collects the alpha term and every
  // gate partial against that center.
  std::vector<double> coeff(a, 0.0);
  const double s = st.S, t_sum = st.T;
  for (std::size_t i = 0; i < a; ++i)
    coeff[i] = 2.0 * gt.eta[i] * st.phi[i] * s;
  for (const auto& mu : gt.mus)
    coeff[mu.j] += 2.0 * mu.value * (st.alpha[mu.k] * s - t_sum);
  double inv = 1.0 / (s * s);
  double coeff_x = 0.0;
  FsVector acc;
  for (std::size_t i = 0; i < a; ++i) {
    double c = coeff[i] * inv;
    if (c == 0.0) continue;
    coeff_x += c;
    acc = axpy(-c, plan_.centers[st.nb[i]], acc);
  }
  return axpy(coeff_x, x, acc);
}

GradientDecomposition ScalarField::beta_decomposition(const FsVector& x,
                                                      int upto) const {
  LocalState st = analyze(x, upto);
  if (!st.covered())
    throw OutsideCover("ScalarField::beta_decomposition: point not covered");
  GradTerms gt = grad_terms(st);
  GradientDecomposition out;
  out.upto = upto < 0 ? plan_.size() : upto;
  out.indices = st.nb;
  out.denominator = st.S * st.S;
  out.etas = gt.eta;
  out.phis.assign(st.phi.begin(), st.phi.end());
  const std::size_t a = st.nb.size();
  out.betas.assign(a, 0.0);
  for (std::size_t i = 0; i < a; ++i)
    out.betas[i] = 2.0 * gt.eta[i] * st.phi[i] * st.S;
  for (const auto& mu : gt.mus) {
    // D_k = sum_i (alpha_k - alpha_i) phi_i = alpha_k S - T.
    double dk = st.alpha[mu.k] * st.S - st.T;
    out.betas[mu.j] += 2.0 * mu.value * dk;
    out.mus.push_back({st.nb[mu.k], st.nb[mu.j], mu.value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vector case

std::vector<double> Approximant::value(const FsVector& x) const {
  std::vector<double> v(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j) v[j] = coords_[j].value(x);
  return v;
}

std::vector<FsVector> Approximant::jacobian_rows(const FsVector& x) const {
  std::vector<FsVector> rows(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j)
    rows[j] = coords_[j].gradient(x);
  return rows;
}

double smallest_singular_value_of_rows(const std::vector<FsVector>& rows) {
  const std::size_t m = rows.size();
  if (m == 1) return norm(rows[0]);
  // Gram matrix J J^T; smallest singular value = sqrt(lambda_min).
  std::vector<double> g(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      g[i * m + j] = g[j * m + i] = inner(rows[i], rows[j]);
  if (m == 2) {
    double tr = g[0] + g[3];
    double det = g[0] * g[3] - g[1] * g[2];
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    double lmin = tr / 2.0 - disc;
    return std::sqrt(std::max(0.0, lmin));
  }
  // Jacobi eigenvalue iteration for small m.
  std::vector<double> a(g);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) off += a[i * m + j] * a[i * m + j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        double apq = a[p * m + q];
        if (std::abs(apq) < 1e-300) continue;
        double theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t i = 0; i < m; ++i) {
          double aip = a[i * m + p], aiq = a[i * m + q];
          a[i * m + p] = c * aip - s * aiq;
          a[i * m + q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < m; ++i) {
          double api = a[p * m + i], aqi = a[q * m + i];
          a[p * m + i] = c * api - s * aqi;
          a[q * m + i] = s * api + c * aqi;
        }
      }
  }
  double lmin = a[0];
  for (std::size_t i = 1; i < m; ++i) lmin = std::min(lmin, a[i * m + i]);
  return std::sqrt(std::max(0.0, lmin));
}

double Approximant::smallest_singular_value(const FsVector& x) const {
  return smallest_singular_value_of_rows(jacobian_rows(x));
}

VectorBuildResult build_vector(const std::vector<Evaluable>& f,
                               const EpsSpec& eps, const WorkingDomain& dom,
                               const BuildConfig& cfg) {
  const int m = static_cast<int>(f.size());
  if (m < 1) throw UsageError("build_vector: need at least one coordinate");
  VectorBuildResult out;

  // One coordinate keeps the full budget; m >= 2 splits it so the euclidean
  // sum of the per-coordinate bands stays inside eps/2.
  std::vector<EpsSpec> eps_j(m);
  for (int j = 0; j < m; ++j) {
    if (m == 1) {
      eps_j[j] = eps;
      out.eps_component.push_back(eps.is_constant ? eps.constant : -1.0);
    } else {
      double scale = 1.0 / std::sqrt(4.0 * m);
      if (eps.is_constant) {
        eps_j[j] = EpsSpec::constant_eps(eps.constant * scale);
      } else {
        Evaluable scaled;
        RealFn base = eps.fn.f;
        scaled.f = [base, scale](const FsVector& x) { return scale * base(x); };
        scaled.modulus.lipschitz = eps.fn.modulus.lipschitz * scale;
        if (eps.fn.modulus.omega) {
          auto om = eps.fn.modulus.omega;
          scaled.modulus.omega = [om, scale](double d) { return scale * om(d); };
        }
        eps_j[j] = EpsSpec::variable_eps(scaled);
      }
      out.eps_component.push_back(eps.is_constant ? eps.constant * scale : -1.0);
    }
  }

  std::vector<GreedyCover> greedy(m);
  std::vector<FsVector> pooled;
  std::vector<double> pooled_radii;
  for (int j = 0; j < m; ++j) {
    greedy[j] = greedy_cover(f[j], eps_j[j], dom, cfg.cover);
    pooled.insert(pooled.end(), greedy[j].centers.begin(),
                  greedy[j].centers.end());
    pooled_radii.insert(pooled_radii.end(), greedy[j].raw_radii.begin(),
                        greedy[j].raw_radii.end());
  }
  PerturbOptions opts;
  opts.seed = cfg.cover.seed;
  opts.jitter_base = dom.jitter_base();
  std::vector<FsVector> moved =
      perturb_to_independent(pooled, pooled_radii, m, opts);

  std::vector<ScalarField> coords;
  std::size_t offset = 0;
  for (int j = 0; j < m; ++j) {
    std::vector<FsVector> centers(moved.begin() + offset,
                                  moved.begin() + offset +
                                      greedy[j].centers.size());
    offset += greedy[j].centers.size();
    CoverPlan plan =
        finalize_cover(greedy[j], std::move(centers), f[j], eps_j[j], dom);
    RadiiConfig rcfg;
    rcfg.family_cap = cfg.radii_family_cap;
    select_radii(plan, rcfg);
    coords.emplace_back(std::move(plan), f[j], eps_j[j]);
  }
  out.approximant = Approximant(std::move(coords));
  return out;
}

}  // namespace scallop
