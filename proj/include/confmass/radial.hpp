#pragma once

// Closed-form building blocks for fields that depend on the radius
// r = |x| (or rho on the hyperbolic chart), optionally with a degree-1
// angular factor.

#include <functional>

#include "confmass/geometry.hpp"

namespace confmass {

/// Value and first two derivatives of a function of one variable.
struct Profile {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using ProfileFn = std::function<Profile(double)>;

Profile operator*(const Profile& a, const Profile& b);
Profile operator+(const Profile& a, const Profile& b);
Profile operator-(const Profile& a, const Profile& b);
Profile scale(const Profile& a, double s);
/// a / r^2, with derivatives in r.
Profile over_r2(const Profile& a, double r);
/// exp(a) and exp(a) - 1 (the latter without cancellation for small a).
Profile exp_of(const Profile& a);
Profile expm1_of(const Profile& a);

/// Components T_ij = B(r) delta_ij + C(r) theta_i theta_j, theta = x / r,
/// with analytic first and second partial derivatives.
MetricSample radial_tensor(const Point& x, const Profile& b, const Profile& c, int order);

/// Metric B(r) delta + C(r) theta theta; the optional deviation profiles give
/// g minus the hyperbolic metric directly.
class RadialMetric final : public MetricField {
 public:
  RadialMetric(Chart chart, ProfileFn b, ProfileFn c, ProfileFn dev_b = nullptr, ProfileFn dev_c = nullptr);
  const Chart& chart() const override { return chart_; }
  MetricSample evaluate(const Point& x, int order) const override;
  std::optional<MetricSample> hyperbolic_deviation(const Point& x, int order) const override;

 private:
  Chart chart_;
  ProfileFn b_, c_, dev_b_, dev_c_;
};

/// f(x) = R(r) * (a + c . theta).
class RadialAngularScalar final : public ScalarField {
 public:
  RadialAngularScalar(Chart chart, ProfileFn radial, double a, Vector c);
  int dimension() const override { return chart_.dimension; }
  ScalarSample evaluate(const Point& x, int order) const override;

 private:
  Chart chart_;
  ProfileFn radial_;
  double a_;
  Vector c_;
};

}  // namespace confmass
