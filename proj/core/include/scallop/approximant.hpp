#pragma once

#include <optional>
#include <vector>

#include "scallop/cover.hpp"
#include "scallop/evaluable.hpp"
#include "scallop/fs_vector.hpp"
#include "scallop/profiles.hpp"

namespace scallop {

/// Everything about phi near one evaluation point, over a truncation prefix:
/// the balls within reach, squared center distances, scalloped memberships,
/// and the partition values. Consumers (gradients, critical search, removal)
/// all start from this.
struct LocalState {
  std::vector<int> nb;        // balls with dist < r, ascending
  std::vector<double> t;      // squared distance to each nb center
  std::vector<char> active;   // nb[i] in its scalloped ball?
  std::vector<double> phi;    // partition value per nb entry (0 if inactive)
  std::vector<double> alpha;  // alpha_k(x) per nb entry
  double S = 0.0;             // sum phi
  double T = 0.0;             // sum alpha*phi
  bool covered() const { return S > 0.0; }
};

/// Coefficients of df_n(x) as a combination of the vectors (x - y_j):
/// df_n(x) = denominator^-1 * sum_j betas[j] (x - y_j). The beta of entry j
/// bundles eta_j phi_j S with the weighted partials mu_(k,j) of the gates, so
/// at least one beta survives whenever x is covered and off the centers.
struct GradientDecomposition {
  int upto = 0;                     // truncation: balls 0..upto-1
  std::vector<int> indices;         // ball ids carrying the terms
  std::vector<double> betas;
  std::vector<double> etas;         // a_j'(t_j) per entry
  std::vector<double> phis;         // phi_j(x) per entry
  struct MuEntry {
    int k, j;
    double value;
  };
  std::vector<MuEntry> mus;         // dg_k/dt_j at the evaluated arguments
  double denominator = 1.0;         // (sum phi)^2

  FsVector reconstruct(const FsVector& x,
                       const std::vector<FsVector>& centers) const;
};

/// One coordinate of the approximant: the perturbed partition-of-unity
/// quotient over a cover plan, with slowly varying radial coefficients in
/// place of constants so the quotient is never locally constant.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(CoverPlan plan, const Evaluable& f, const EpsSpec& eps);

  const CoverPlan& plan() const { return plan_; }
  CoverPlan& plan() { return plan_; }
  int size() const { return plan_.size(); }

  LocalState analyze(const FsVector& x, int upto = -1) const;

  double value(const FsVector& x) const;
  double value_truncated(const FsVector& x, int upto) const;
  std::optional<double> try_value(const FsVector& x) const;

  FsVector gradient(const FsVector& x) const;
  FsVector gradient_truncated(const FsVector& x, int upto) const;
  std::optional<FsVector> try_gradient_truncated(const FsVector& x,
                                                 int upto) const;

  GradientDecomposition beta_decomposition(const FsVector& x, int upto) const;

  double alpha_value(int k, const FsVector& x) const;
  double alpha_value0(int k) const { return alphas_[k].value0(); }
  double alpha_amplitude(int k) const { return alphas_[k].amplitude(); }
  const SmoothProfile& alpha_profile(int k) const { return alphas_[k]; }

  /// The gate profile theta_(k,j) for j < k, materialized on demand.
  SmoothProfile gate(int k, int j) const;
  /// The full product gadget for ball k (theta_(k,0..k)).
  ProductGadget gadget(int k) const;

  /// Smallest prefix length n such that phi == f_n on a neighborhood of x:
  /// one past the last ball whose closed ball contains x.
  int locality_index(const FsVector& x) const;

 private:
  struct GradTerms;
  GradTerms grad_terms(const LocalState& st) const;
  FsVector gradient_from_state(const FsVector& x, const LocalState& st) const;

  CoverPlan plan_;
  std::vector<SmoothProfile> alphas_;
};

/// Smallest singular value of the matrix whose rows are given sparse vectors
/// (the plain norm for one row; Gram eigenvalues for small m).
double smallest_singular_value_of_rows(const std::vector<FsVector>& rows);

/// The approximant: m scalar coordinates with pooled-independent centers.
class Approximant {
 public:
  Approximant() = default;
  explicit Approximant(std::vector<ScalarField> coords)
      : coords_(std::move(coords)) {}

  int m() const { return static_cast<int>(coords_.size()); }
  const ScalarField& coord(int j) const { return coords_[j]; }
  ScalarField& coord(int j) { return coords_[j]; }

  std::vector<double> value(const FsVector& x) const;
  std::vector<FsVector> jacobian_rows(const FsVector& x) const;

  /// Smallest singular value of the Jacobian at x (norm of the gradient when
  /// m = 1); the pointwise surjectivity certificate.
  double smallest_singular_value(const FsVector& x) const;

 private:
  std::vector<ScalarField> coords_;
};

struct VectorBuildResult {
  Approximant approximant;
  std::vector<double> eps_component;  // accuracy budget per coordinate
};

struct BuildConfig {
  CoverConfig cover;
  int radii_family_cap = 6;
};

/// Case-style builder: one coordinate uses the budget directly; for m >= 2
/// each coordinate gets eps/sqrt(4m) and all centers are pooled before the
/// independence perturbation. Radii are then selected per coordinate.
VectorBuildResult build_vector(const std::vector<Evaluable>& f,
                               const EpsSpec& eps, const WorkingDomain& dom,
                               const BuildConfig& cfg = {});

}  // namespace scallop
