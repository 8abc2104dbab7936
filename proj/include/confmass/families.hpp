#pragma once

// Built-in analytic families. Every field here carries closed-form first
// and second derivatives.

#include <cmath>
#include <map>
#include <string>
#include <variant>

#include "confmass/data.hpp"
#include "confmass/radial.hpp"

namespace confmass {

// Asymptotically flat ends.
InitialData flat(int n);
InitialData schwarzschild_isotropic(double m);
/// e^{2 a r^{-tau}} delta.
InitialData conformally_flat(int n, double a, double tau);
/// delta with the Bowen-York extrinsic curvature of momentum p (n = 3).
InitialData bowen_york(const Vector& p);

/// K_ij = 3/(2 r^2) [p_i n_j + p_j n_i - (delta_ij - n_i n_j) p.n], n = x / r.
class BowenYorkCurvature final : public SymTensorField {
 public:
  explicit BowenYorkCurvature(Vector p);
  int dimension() const override { return 3; }
  TensorSample evaluate(const Point& x, int order) const override;

 private:
  Vector p_;
};

/// f = r^{-tau} (a + c . theta) on a cartesian end.
ScalarFieldPtr af_factor(int n, double a, double tau, const Vector& c = Vector());
/// f = 2/(n-2) log(1 + c / (2 r^{n-2})), for which e^{2f} delta is scalar flat.
ScalarFieldPtr af_harmonic_factor(int n, double c);

// Asymptotically hyperbolic ends, on the chart y = rho * theta.
AHMetric hyperbolic(int n);
/// e^{2f} b with f = e^{-tau rho} (a + c . theta).
AHMetric ah_conformal(int n, double a, double tau, const Vector& c = Vector());
/// dr^2 / (1 + r^2 - 2m r^{2-n}) + r^2 h0 written as d rho^2 + r(rho)^2 h0, n in {3, 4}.
AHMetric ads_schwarzschild(int n, double m);
/// f = e^{-tau rho} (a + c . theta).
ScalarFieldPtr ah_factor(int n, double a, double tau, const Vector& c = Vector());

/// Area radius r(rho) of the AdS-Schwarzschild family with its first two
/// rho-derivatives, and q = r^2 - sinh^2 rho computed without cancellation.
struct AdsRadius {
  Profile r;
  Profile q;
};

class AdsSchwarzschildRadius {
 public:
  AdsSchwarzschildRadius(int n, double m);
  double horizon() const { return horizon_; }
  /// asinh(r) - rho(r), the offset fixed so that rho - asinh(r) -> 0.
  double offset(double r) const;
  double rho_of_r(double r) const { return std::asinh(r) - offset(r); }
  AdsRadius at(double rho) const;

 private:
  AdsRadius solve(double rho) const;

  int n_;
  double m_;
  double horizon_;
};

/// Name, dimension and named parameters. Scalars are one-element vectors;
/// "p" and "c" may carry n components.
struct FamilySpec {
  std::string name;
  int dimension = 3;
  std::map<std::string, std::vector<double>> params;

  double scalar(const std::string& key, double fallback) const;
  double scalar(const std::string& key) const;
  Vector vector(const std::string& key, int n) const;
};

using FamilyResult = std::variant<InitialData, AHMetric>;

FamilyResult make_family(const FamilySpec& spec);
ScalarFieldPtr make_factor(const FamilySpec& spec);
SymTensorFieldPtr make_extrinsic(const FamilySpec& spec);

/// Names accepted by make_family, make_factor and make_extrinsic.
const std::vector<std::string>& metric_family_names();
const std::vector<std::string>& factor_family_names();

}  // namespace confmass
