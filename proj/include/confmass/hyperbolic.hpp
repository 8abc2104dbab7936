#pragma once

// Hyperbolic background b = d rho^2 + sinh^2(rho) h0 in geodesic normal
// coordinates y = rho * theta, its orthonormal frame, and the conformal
// Killing data (X^(i), V^(i)) carried over from the ball model through
// |x_ball| = tanh(rho / 2).

#include "confmass/radial.hpp"

namespace confmass {

Profile hyperbolic_b_profile(double rho);  // sinh^2(rho) / rho^2
Profile hyperbolic_c_profile(double rho);  // 1 - sinh^2(rho) / rho^2

class HyperbolicMetric final : public MetricField {
 public:
  explicit HyperbolicMetric(int n, double rho_min = 0.05);
  const Chart& chart() const override { return chart_; }
  MetricSample evaluate(const Point& x, int order) const override;
  std::optional<MetricSample> hyperbolic_deviation(const Point& x, int order) const override;

 private:
  Chart chart_;
};

/// Orthonormal basis (n x (n-1)) of the plane perpendicular to y0. Held fixed
/// while differentiating the frame near y0 so the frame is smooth there.
Matrix tangent_reference(const Point& y0);

/// Columns are e_0 = d/d rho and e_a = phi_a / sinh(rho), a = 1..n-1, in
/// coordinate components; the phi_a are Gram-Schmidt projections of the
/// reference basis onto the sphere through y.
Matrix hyperbolic_frame(const Point& y, const Matrix& reference);
inline Matrix hyperbolic_frame(const Point& y) { return hyperbolic_frame(y, tangent_reference(y)); }

/// V^(0) = cosh(rho), V^(j) = theta^j sinh(rho), j = 1..n.
double lapse(int i, const Point& y);

/// X^(0) = x^k d_k and X^(j) = d_j in the ball model, in y-components.
Vector killing_field(int i, const Point& y);

/// jac(k, m) = d_m X^k.
Matrix killing_field_jacobian(int i, const Point& y);

/// div_b X^(i), to be compared with n V^(i).
double killing_divergence(int i, const Point& y);

/// Max-abs entry of L_X b - (2/n)(div_b X) b.
double conformal_killing_residual(int i, const Point& y);

}  // namespace confmass
