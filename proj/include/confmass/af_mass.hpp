#pragma once

// Asymptotically flat ends: decay validation, ADM energy-momentum with
// radius extrapolation, and the conformal mass-linearity and positive-mass
// checks built on them.

#include <string>

#include "confmass/conformal.hpp"
#include "confmass/data.hpp"
#include "confmass/fit.hpp"
#include "confmass/kernels.hpp"
#include "confmass/quadrature.hpp"

namespace confmass {

/// start * ratio^k, k = 0..count-1.
std::vector<double> geometric_schedule(double start, double ratio, int count);
/// start + step * k, k = 0..count-1.
std::vector<double> arithmetic_schedule(double start, double step, int count);

/// One fitted quantity of a decay report.
struct DecayQuantity {
  std::string name;
  std::vector<double> radii;
  std::vector<double> maxima;  // max over the sphere sample at each radius
  double slope = 0.0;          // fitted exponent; -inf when the quantity vanishes
  double fit_residual = 0.0;
  double threshold = 0.0;      // pass when slope <= threshold
  bool vanishes = false;       // every maximum at or below the rounding floor
  bool pass = true;
};

struct DecayReport {
  std::vector<DecayQuantity> quantities;
  std::vector<std::string> notes;
  bool pass = true;

  const DecayQuantity* find(const std::string& name) const;
};

/// Fits maxima[k] against log s[k] (power) or s[k] (exponential). Values at or
/// below floors[k] are rounding noise; a quantity with no value above its
/// floor vanishes and passes.
DecayQuantity fit_decay_quantity(std::string name, const std::vector<double>& s, const std::vector<double>& maxima,
                                 const std::vector<double>& floors, double threshold, DecayModel model,
                                 std::vector<std::string>& notes);

/// Maxima over the sample on S_r of |g - delta|, r|dg|, r|K|, |mu|, |J|_g,
/// fitted against log r. The first three pass when the slope is at most
/// -tau + 0.1 and below -max(1/2, n-3); mu and J need -(n + eps) + 0.1.
/// With f present, |f|, r|grad f|_g and r|Lap_g f|^{1/2} are fitted against
/// -f_tau + 0.1 (f_tau <= 0 means data.tau).
DecayReport validate_af(const InitialData& data, const ScalarFieldPtr& f, const std::vector<double>& radii,
                        const SphereRule& rule, double f_tau = 0.0, Execution execution = Execution::parallel);

struct AdmFlux {
  double E = 0.0;
  Vector P;
};

/// E(r) = [2(n-1) w]^{-1} sum_q (g_ij,i - g_ii,j) theta^j r^{n-1} w_q and
/// P_i(r) = [(n-1) w]^{-1} sum_q (K_ij - tr_g K g_ij) theta^j r^{n-1} w_q,
/// with w the area of the unit sphere.
AdmFlux adm_flux(const InitialData& data, double r, const SphereRule& rule,
                 Execution execution = Execution::parallel);

struct EnergyMomentum {
  double E = 0.0;
  Vector P;
  std::vector<double> radii;
  std::vector<AdmFlux> flux;
  Extrapolation E_fit;
  std::vector<Extrapolation> P_fit;
  bool converged = true;

  /// Largest extrapolation error estimate over E and P.
  double error_estimate() const;
};

/// Fluxes on the radii, extrapolated by F(r) = F_inf + c r^{-p}, p >= 1/2,
/// starting from p = tau.
EnergyMomentum adm_energy_momentum(const InitialData& data, const std::vector<double>& radii, const SphereRule& rule,
                                   double tol = 1e-3, Execution execution = Execution::parallel);

/// (e^{2 beta f} g, e^{beta f} K) as initial data with the decay metadata of data.
InitialData deformed_data(const InitialData& data, const ScalarFieldPtr& f, double beta);
/// (e^{2f} g, e^{f} K).
InitialData fully_deformed_data(const InitialData& data, const ScalarFieldPtr& f);

struct MassLinearity {
  EnergyMomentum base;      // (g, K)
  EnergyMomentum deformed;  // (g-bar, K-bar)
  EnergyMomentum full;      // (g~, K~)
  double energy_residual = 0.0;          // |E-bar - (1-b) E - b E~|
  double momentum_residual_bar = 0.0;    // |P-bar - P|_inf
  double momentum_residual_tilde = 0.0;  // |P~ - P|_inf
  double extrapolation_error = 0.0;      // max of the three error estimates
};

MassLinearity check_mass_linearity(const InitialData& data, const ScalarFieldPtr& f, double beta,
                                   const std::vector<double>& radii, const SphereRule& rule, double tol = 1e-3,
                                   Execution execution = Execution::parallel);

struct SpacetimeTheoremReport {
  std::vector<double> slack;     // lhs - rhs of the pointwise hypothesis, per sample point
  double min_slack = 0.0;
  double noise = 0.0;            // rounding floor below which a negative slack is not a violation
  bool hypothesis_holds = true;  // min_slack >= -noise
  double combined_energy = 0.0;  // (1-b) E + b E~
  double momentum_norm = 0.0;    // |P|
  double conclusion_slack = 0.0; // (1-b) E + b E~ - |P|
  bool conclusion_holds = true;  // conclusion_slack >= -tol
  bool violation = false;        // hypothesis holds and conclusion fails
  bool rigid = false;            // |combined_energy| <= tol
  MassLinearity masses;
};

/// Hypothesis (1-b) mu + b e^{2f} mu~ >= (1-b)|J|_g + b e^{2f}|J~|_{g~} on the
/// sample, conclusion (1-b) E + b E~ >= |P| from the extrapolated masses.
SpacetimeTheoremReport check_theorem_spacetime(const InitialData& data, const ScalarFieldPtr& f, double beta,
                                               const std::vector<Point>& sample, const std::vector<double>& radii,
                                               const SphereRule& rule, double tol = 1e-6,
                                               Execution execution = Execution::parallel);

/// Points r_k * theta_q for the radii and the nodes of an order-`order` rule.
std::vector<Point> shell_sample(int n, const std::vector<double>& radii, int order);

}  // namespace confmass
