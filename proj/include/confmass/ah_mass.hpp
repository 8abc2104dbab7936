#pragma once

// Asymptotically hyperbolic manifolds: G-tensor through the deviation from
// the hyperbolic background, decay validation in the orthonormal frame, the
// mass integral with rho-extrapolation, and the linearity and positive-mass
// checks.

#include <optional>
#include <string>

#include "confmass/af_mass.hpp"
#include "confmass/hyperbolic.hpp"

namespace confmass {

/// Curvature of g = b + D relative to the background b:
///   dGamma^k_ij = g^kl (Gamma_{l,ij}(D) - D_la Gamma(b)^a_ij),
///   dRic = Ric_g - Ric_b,  dS = tr_g dRic + (n-1) tr_g D,
///   G^g = dRic - dS g / 2 + (n-1) D.
/// Nothing of size Ric_b is formed, so G keeps full relative precision where
/// g - b is small.
struct DeviationCurvature {
  Matrix deviation;  // D
  Matrix metric;     // g
  Matrix ricci;      // dRic
  double ricci_scale = 0.0;   // magnitude of the terms summed into dRic
  double scalar = 0.0;        // dS = S_g + n(n-1)
  double scalar_scale = 0.0;  // magnitude of the terms summed into dS
  Matrix G;
};

/// Uses hyperbolic_deviation when the field supplies it and g - b otherwise.
DeviationCurvature deviation_curvature(const MetricField& g, const Point& y);

/// Covariant G^g = Ric - [S + (n-1)(n-2)] g / 2 at y.
SymTensor2 G_tensor(const AHMetric& g, const Point& y);

/// The rho-schedule used when none is given: 3, 3.5, ..., 5.5.
std::vector<double> default_rho_schedule();

/// Frame components g(e_a, e_b) - delta_ab with their first and second frame
/// derivatives (fourth-order differences along the frame vectors), fitted
/// against rho: pass when the slope is at most -tau + 0.05 and below -n/2.
/// The shells int |S + n(n-1)| e^rho dv_b between consecutive radii must
/// decay geometrically.
DecayReport validate_ah(const AHMetric& g, const std::vector<double>& rhos, const SphereRule& rule,
                        Execution execution = Execution::parallel);

/// Which normal and area element the flux integral uses.
enum class FluxNormal { metric, background };

/// -c_n sum_q G(X^(i), nu) dsigma over the geodesic sphere of radius rho,
/// c_n = 1 / ((n-1)(n-2) w). Components i = 0..n.
Vector ah_mass_flux(const AHMetric& g, double rho, const SphereRule& rule, FluxNormal normal = FluxNormal::metric,
                    Execution execution = Execution::parallel);

/// Causal type of (M_0, M_1..M_n) under M_0^2 - sum M_j^2.
std::string classify_mass(const Vector& m, double band = 1e-6);

struct AHMassVector {
  Vector M;
  std::vector<double> rhos;
  std::vector<Vector> flux;
  std::vector<Extrapolation> fits;
  std::string classification;
  bool converged = true;

  double error_estimate() const;
};

/// Fluxes on the schedule, each component extrapolated by F_inf + c e^{-q rho}.
AHMassVector ah_mass(const AHMetric& g, const std::vector<double>& rhos, const SphereRule& rule, double tol = 1e-3,
                     FluxNormal normal = FluxNormal::metric, Execution execution = Execution::parallel);

/// e^{2 beta f} g with the decay rate of g.
AHMetric deformed_metric(const AHMetric& g, const ScalarFieldPtr& f, double beta);

struct AHLinearity {
  AHMassVector base;      // g
  AHMassVector deformed;  // e^{2 beta f} g
  AHMassVector full;      // e^{2f} g
  Vector residual;        // M(g-bar) - (1-b) M(g) - b M(g~)
  double extrapolation_error = 0.0;
};

AHLinearity check_ah_linearity(const AHMetric& g, const ScalarFieldPtr& f, double beta, const std::vector<double>& rhos,
                               const SphereRule& rule, double tol = 1e-3, Execution execution = Execution::parallel);

/// Inner boundary |y| = radius with a user-supplied Yamabe invariant.
struct BoundarySpec {
  double radius = 1.0;
  double yamabe = 0.0;
  Orientation orientation = Orientation::outward;
  int order = 12;  // quadrature order on the boundary
};

struct BoundaryCheck {
  double area_term = 0.0;        // int e^{beta(n-1)f} dsigma_g
  double rhs = 0.0;              // [Y / ((n-1)(n-2)) area_term^{-2/(n-1)} + 1]^{1/2}
  double max_lhs = 0.0;          // max of e^{-bf}(H + b(n-1) f_nu) over the boundary nodes
  double slack = 0.0;            // rhs - max_lhs for the chosen orientation
  double slack_opposite = 0.0;   // the same with the opposite orientation
  bool holds = true;
};

struct AHTheoremReport {
  std::vector<double> slack;  // e^{-2bf}((1-b) S + b e^{2f} S~) + n(n-1), per sample point
  double min_slack = 0.0;
  double noise = 0.0;
  bool hypothesis_holds = true;
  std::optional<BoundaryCheck> boundary;
  Vector combined_mass;  // (1-b) M(g) + b M(g~)
  std::string classification;
  bool conclusion_holds = true;  // future-timelike or zero
  bool violation = false;        // hypotheses hold and conclusion fails
  AHMassVector base;
  AHMassVector full;
};

/// Throws UsageError when a boundary is given without a positive Yamabe value.
AHTheoremReport check_theorem_ah(const AHMetric& g, const ScalarFieldPtr& f, double beta,
                                 const std::vector<Point>& sample, const std::optional<BoundarySpec>& boundary,
                                 const std::vector<double>& rhos, const SphereRule& rule, double tol = 1e-3,
                                 Execution execution = Execution::parallel);

/// Decay of |nu_g - nu_b|_b, |dsigma_g / dsigma_b - 1|, the frame norm of
/// Ric_g - Ric_b and |S_g - S_b|, each fitted against -tau + 0.1.
DecayReport ah_asymptotics(const AHMetric& g, const std::vector<double>& rhos, const SphereRule& rule,
                           Execution execution = Execution::parallel);

}  // namespace confmass
