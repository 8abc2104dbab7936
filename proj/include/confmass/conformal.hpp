#pragma once

// Conformal deformation g -> e^{2 beta f} g, K -> e^{beta f} K and the closed
// forms for every transformed quantity. Each closed form is written against
// data of g alone (or g and g~ = e^{2f} g for the convex combinations), so it
// can be compared with curvature computed directly from the deformed metric.

#include "confmass/constraints.hpp"

namespace confmass {

class ConformalFactor {
 public:
  ConformalFactor(ScalarFieldPtr f, double beta);
  const ScalarFieldPtr& field() const { return f_; }
  double beta() const { return beta_; }

 private:
  ScalarFieldPtr f_;
  double beta_;
};

/// e^{2 s f} g with derivatives by the product and chain rules.
class ConformallyDeformedMetric final : public MetricField {
 public:
  ConformallyDeformedMetric(MetricFieldPtr g, ScalarFieldPtr f, double s);
  const Chart& chart() const override { return g_->chart(); }
  MetricSample evaluate(const Point& x, int order) const override;
  Provenance provenance() const override;
  /// e^{2sf} g - b = expm1(2sf) b + e^{2sf} (g - b), when g supplies g - b.
  std::optional<MetricSample> hyperbolic_deviation(const Point& x, int order) const override;

 private:
  MetricFieldPtr g_;
  ScalarFieldPtr f_;
  double s_;
};

/// e^{s f} K for covariant K.
class ConformallyScaledTensor final : public SymTensorField {
 public:
  ConformallyScaledTensor(SymTensorFieldPtr k, ScalarFieldPtr f, double s);
  int dimension() const override { return k_->dimension(); }
  TensorSample evaluate(const Point& x, int order) const override;

 private:
  SymTensorFieldPtr k_;
  ScalarFieldPtr f_;
  double s_;
};

struct DeformedData {
  MetricFieldPtr g;
  SymTensorFieldPtr k;  // null when no K was given
};

/// (e^{2 beta f} g, e^{beta f} K).
DeformedData deform(const MetricFieldPtr& g, const SymTensorFieldPtr& k, const ConformalFactor& cf);

/// The same with e^{f} K; g~ and K~ of the convex-combination identities.
DeformedData deform_full(const MetricFieldPtr& g, const SymTensorFieldPtr& k, const ScalarFieldPtr& f);

// Pointwise closed forms for e^{2f} g. Pass a scaled f to absorb beta.

/// Gamma-bar - Gamma = f_j delta^k_i + f_i delta^k_j - f^k g_ij.
Christoffel christoffel_transform(const MetricField& g, const ScalarField& f, const Point& x);

/// R-bar_ij = R_ij - g_ij Lap f + (2-n) f_;ij + (2-n)|df|^2 g_ij + (n-2) f_i f_j.
SymTensor2 ricci_transform(const MetricField& g, const ScalarField& f, const Point& x);

/// S-bar = e^{-2f} (S - 2(n-1) Lap f - (n-1)(n-2)|df|^2).
double scalar_transform(const MetricField& g, const ScalarField& f, const Point& x);

/// mu-bar and J-bar (in g-bar contravariant components) of the deformed data:
///   2 mu-bar = e^{-2 beta f} (2 mu - 2(n-1) beta Lap f - (n-1)(n-2) beta^2 |df|^2),
///   e^{3 beta f} J-bar^i = J^i + beta (n-1) f_j K^ij.
ConstraintPair constraint_transform(const MetricField& g, const SymTensorField& k, const ConformalFactor& cf,
                                    const Point& x);

struct ConvexIdentity {
  double mu_bar = 0.0;     // e^{-2bf}((1-b) mu + b e^{2f} mu~ + b(1-b)(n-1)(n-2)|df|^2 / 2)
  Vector J_bar;            // e^{-3bf}((1-b) J + b e^{3f} J~)
  double J_bar_norm = 0.0; // |J-bar|_{g-bar}
  double bound = 0.0;      // e^{-2bf}((1-b)|J|_g + b e^{2f}|J~|_{g~})
  bool within_bound = true;
  // Constituents, evaluated directly on (g, K) and (g~, K~).
  ConstraintPair base;
  ConstraintPair full;
};

ConvexIdentity constraint_convex_identity(const MetricFieldPtr& g, const SymTensorFieldPtr& k,
                                          const ScalarFieldPtr& f, double beta, const Point& x);

/// S-bar = e^{-2bf}((1-b) S + b e^{2f} S~ + b(1-b)(n-1)(n-2)|df|^2).
double scalar_convex(const MetricFieldPtr& g, const ScalarFieldPtr& f, double beta, const Point& x);

/// G^{g-bar} = (1-b) G^g + b G^{g~} + (n-1)(n-2)/2 [(1-b) + b e^{2f} - e^{2bf}] g
///           + b(b-1)(n-2)(n-3)/2 |df|^2 g + b(b-1)(n-2) f_i f_j.
SymTensor2 G_transform(const MetricFieldPtr& g, const ScalarFieldPtr& f, double beta, const Point& x);

/// H-bar = e^{-beta f} (H + beta (n-1) f_nu).
double mean_curvature_transform(double h, double f_nu, double f, double beta, int n);

/// |a - b|_inf / max(|a|_inf, |b|_inf, scale).
double relative_error(const Matrix& a, const Matrix& b, double scale);
double relative_error(double a, double b, double scale = 1.0);

/// Closed form against direct computation on (g-bar, K-bar), per identity.
/// Christoffel, Ricci and G use scale |g|_inf; scalars and vectors use 1.
struct IdentityResiduals {
  double christoffel = 0.0;
  double ricci = 0.0;
  double scalar = 0.0;
  double mu = 0.0;
  double J = 0.0;
  double mu_convex = 0.0;
  double J_convex = 0.0;
  double scalar_convex = 0.0;
  double G = 0.0;
  bool J_bound_holds = true;

  double max() const;
};

IdentityResiduals conformal_identity_residuals(const MetricFieldPtr& g, const SymTensorFieldPtr& k,
                                               const ScalarFieldPtr& f, double beta, const Point& x);

}  // namespace confmass
