#pragma once

// Decay-rate fits and limit extrapolation for flux sequences.

#include <vector>

namespace confmass {

/// Least-squares line through (u_k, v_k).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the residuals
};

LineFit fit_line(const std::vector<double>& u, const std::vector<double>& v);
/// Slope of log(value) against log(r).
LineFit fit_power_decay(const std::vector<double>& r, const std::vector<double>& values);
/// Slope of log(value) against rho.
LineFit fit_exponential_decay(const std::vector<double>& rho, const std::vector<double>& values);

enum class DecayModel { power, exponential };

/// F(s) = limit + coefficient * phi(s), phi = s^{-exponent} or e^{-exponent s}.
struct Extrapolation {
  double limit = 0.0;
  double coefficient = 0.0;
  double exponent = 0.0;
  double residual = 0.0;        // RMS misfit of the model
  double error_estimate = 0.0;  // |limit - limit with the innermost sample dropped|
  bool converged = true;
};

/// Variable projection: for fixed exponent the model is linear in
/// (limit, coefficient); the exponent is found by a grid scan refined with a
/// golden-section search. Needs at least 4 samples with s increasing.
/// Power exponents are constrained to [0.5, 12], exponential rates to
/// [0.05, 12]. converged is error_estimate <= tol * max(1, |limit|).
Extrapolation extrapolate(const std::vector<double>& s, const std::vector<double>& values, DecayModel model,
                          double initial_exponent, double tol);

}  // namespace confmass
