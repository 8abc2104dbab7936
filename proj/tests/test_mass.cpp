#include <cmath>

#include "confmass/ah_mass.hpp"
#include "confmass/families.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confmass;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

std::shared_ptr<ZeroScalar> zero3() { return std::make_shared<ZeroScalar>(3); }

// Exact flux of e^{2f} b for radial f = a e^{-tau rho} on the geodesic sphere of radius rho.
double conformal_flux(int n, double a, double tau, double rho) {
  const double f = a * std::exp(-tau * rho);
  const double fp = -tau * f;
  return -0.5 * std::exp((n - 2) * f) * std::pow(std::sinh(rho), n) *
         (2.0 * fp / std::tanh(rho) + fp * fp - std::expm1(2.0 * f));
}

}  // namespace

TEST_CASE("validate_af examples") {
  const SphereRule rule = sphere_rule(3, 8);
  const std::vector<double> radii = geometric_schedule(8.0, 2.0, 5);
  const DecayReport flat_rep = validate_af(flat(3), nullptr, radii, rule);
  CHECK(flat_rep.pass);
  for (const DecayQuantity& q : flat_rep.quantities) {
    CHECK(q.vanishes);
    for (double m : q.maxima) CHECK(m <= 1e-14);
  }

  const InitialData s = schwarzschild_isotropic(1.0);
  const DecayReport rep = validate_af(s, af_factor(3, 0.5, 1.0), geometric_schedule(32.0, 2.0, 5), rule, 1.0);
  CHECK(rep.pass);
  CHECK(rep.find("metric")->slope == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(rep.find("mu")->vanishes);
  CHECK(rep.find("factor")->pass);
  CHECK(rep.find("factor_gradient")->pass);
  CHECK(rep.find("factor_laplacian")->pass);

  const DecayReport cf = validate_af(conformally_flat(3, 0.3, 1.0), nullptr, radii, rule);
  CHECK(cf.pass);
  CHECK(cf.find("metric")->slope == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(cf.find("mu")->slope == doctest::Approx(-4.0).epsilon(0.1));

  const DecayReport by = validate_af(bowen_york(vec3(0, 0, 1)), nullptr, radii, rule);
  CHECK(by.pass);
  CHECK(by.find("extrinsic")->slope == doctest::Approx(-1.0).epsilon(0.1));

  CHECK_THROWS_AS(validate_af(flat(3), nullptr, {10.0, 20.0, 40.0}, rule), UsageError);
}

TEST_CASE("adm_flux examples and invariants") {
  const SphereRule rule = sphere_rule(3, 24);
  const AdmFlux f0 = adm_flux(flat(3), 10.0, rule);
  CHECK(f0.E == 0.0);
  CHECK(max_abs(f0.P) == 0.0);

  CHECK(adm_flux(conformally_flat(3, 0.5, 1.0), 100.0, rule).E == doctest::Approx(0.5).epsilon(1e-2));

  const Vector p = vec3(0, 0, 1);
  const InitialData by = bowen_york(p);
  const AdmFlux base = adm_flux(by, 10.0, rule);
  CHECK(max_abs(Vector(base.P - p)) <= 1e-10);
  for (double r : {20.0, 40.0}) CHECK(max_abs(Vector(adm_flux(by, r, rule).P - base.P)) <= 1e-10);

  // Doubling the quadrature order changes nothing beyond 1e-10.
  const SphereRule fine = sphere_rule(3, 48);
  for (const InitialData& d : {schwarzschild_isotropic(1.0), conformally_flat(3, 0.3, 1.0), by}) {
    const AdmFlux a = adm_flux(d, 20.0, rule);
    const AdmFlux b = adm_flux(d, 20.0, fine);
    CHECK(std::abs(a.E - b.E) <= 1e-10);
    CHECK(max_abs(Vector(a.P - b.P)) <= 1e-10);
  }

  // Serial and parallel reductions agree bit for bit.
  const AdmFlux ser = adm_flux(by, 10.0, rule, Execution::serial);
  const AdmFlux par = adm_flux(by, 10.0, rule, Execution::parallel);
  CHECK(ser.E == par.E);
  CHECK((ser.P.array() == par.P.array()).all());
}

TEST_CASE("adm_energy_momentum examples") {
  const SphereRule rule = sphere_rule(3, 24);
  const std::vector<double> radii = geometric_schedule(32.0, 2.0, 5);
  const EnergyMomentum z = adm_energy_momentum(flat(3), radii, rule);
  CHECK(z.E == 0.0);
  CHECK(max_abs(z.P) == 0.0);
  CHECK(z.E_fit.residual == 0.0);

  CHECK(adm_energy_momentum(schwarzschild_isotropic(1.0), radii, rule).E == doctest::Approx(1.0).epsilon(1e-4));

  const Vector p = vec3(0.1, 0, 0);
  const InitialData mixed(conformally_flat(3, 0.3, 1.0).g, std::make_shared<BowenYorkCurvature>(p), 1.0, 1.0);
  const EnergyMomentum em = adm_energy_momentum(mixed, radii, rule);
  CHECK(std::abs(em.E - 0.3) <= 1e-3);
  CHECK(max_abs(Vector(em.P - p)) <= 1e-6);
  CHECK(em.converged);
  for (std::size_t k = 1; k < em.radii.size(); ++k) CHECK(em.radii[k] > em.radii[k - 1]);
}

TEST_CASE("energy and momentum under a rigid rotation of the end") {
  std::mt19937_64 rng(61);
  const Matrix rot = testing_support::random_rotation(rng, 3);
  const Vector c = vec3(0.05, -0.1, 0.08);
  const Vector p = vec3(0.2, 0.1, -0.3);
  const SphereRule rule = sphere_rule(3, 24);
  const std::vector<double> radii = geometric_schedule(32.0, 2.0, 5);
  auto build = [](const Vector& cc, const Vector& pp) {
    const DeformedData d = deform(flat(3).g, nullptr, ConformalFactor(af_factor(3, 0.3, 1.0, cc), 1.0));
    return InitialData(d.g, std::make_shared<BowenYorkCurvature>(pp), 1.0, 1.0);
  };
  const EnergyMomentum a = adm_energy_momentum(build(c, p), radii, rule);
  const EnergyMomentum b = adm_energy_momentum(build(rot * c, rot * p), radii, rule);
  CHECK(std::abs(a.E - b.E) <= 1e-9);
  CHECK(std::abs(a.P.norm() - b.P.norm()) <= 1e-10);
  CHECK(max_abs(Vector(rot * a.P - b.P)) <= 1e-10);
}

TEST_CASE("check_mass_linearity examples") {
  const SphereRule rule = sphere_rule(3, 24);
  const std::vector<double> radii = geometric_schedule(32.0, 2.0, 5);
  const MassLinearity z = check_mass_linearity(schwarzschild_isotropic(1.0), zero3(), 0.5, radii, rule);
  CHECK(z.energy_residual == 0.0);
  CHECK(z.momentum_residual_bar == 0.0);
  CHECK(z.momentum_residual_tilde == 0.0);

  const MassLinearity fl = check_mass_linearity(flat(3), af_factor(3, 0.4, 1.0), 0.5, radii, rule);
  CHECK(fl.base.E == 0.0);
  CHECK(std::abs(fl.full.E - 0.4) <= 1e-3);
  CHECK(std::abs(fl.deformed.E - 0.2) <= 1e-3);
  CHECK(fl.energy_residual <= 1e-3);

  const InitialData s(schwarzschild_isotropic(1.0).g, std::make_shared<BowenYorkCurvature>(vec3(0, 0, 0.3)), 1.0, 1.0);
  const MassLinearity sl = check_mass_linearity(s, af_factor(3, 0.2, 1.0), 0.75, radii, rule);
  CHECK(sl.energy_residual <= 1e-3);
  CHECK(sl.momentum_residual_bar <= 1e-5);
  CHECK(sl.momentum_residual_tilde <= 1e-5);
  CHECK(sl.energy_residual <= 3.0 * sl.extrapolation_error + 1e-12);
  CHECK(fl.energy_residual <= 3.0 * fl.extrapolation_error + 1e-12);
}

TEST_CASE("check_theorem_spacetime examples") {
  const SphereRule rule = sphere_rule(3, 16);
  const std::vector<double> radii = geometric_schedule(32.0, 2.0, 5);
  const std::vector<Point> sample = shell_sample(3, {2.0, 5.0, 12.0}, 4);

  const SpacetimeTheoremReport z = check_theorem_spacetime(flat(3), zero3(), 0.5, sample, radii, rule);
  CHECK(z.min_slack == 0.0);
  CHECK(z.conclusion_slack == 0.0);
  CHECK(z.hypothesis_holds);
  CHECK_FALSE(z.violation);

  const SpacetimeTheoremReport s = check_theorem_spacetime(schwarzschild_isotropic(1.0), zero3(), 0.5, sample, radii, rule);
  CHECK(s.hypothesis_holds);
  CHECK(std::abs(s.min_slack) <= s.noise);
  CHECK(s.conclusion_slack == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_FALSE(s.violation);

  const SpacetimeTheoremReport neg = check_theorem_spacetime(flat(3), af_factor(3, 0.5, 1.0), 0.5, sample, radii, rule);
  CHECK_FALSE(neg.hypothesis_holds);
  CHECK(neg.min_slack < 0.0);
  CHECK(neg.conclusion_slack == doctest::Approx(0.25).epsilon(1e-3));
  CHECK_FALSE(neg.violation);
  // mu~ = -e^{-2a/r} a^2 / r^4 at r = 2, times b e^{2f}
  const double a = 0.5;
  double expected = 0.0;
  for (const Point& x : sample) {
    const double r = x.norm();
    expected = std::min(expected, -0.5 * a * a / std::pow(r, 4));
  }
  CHECK(neg.min_slack == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("G_tensor examples") {
  Point y(3);
  y << 1.5, -1.2, 2.0;
  CHECK(max_abs(G_tensor(hyperbolic(3), y).c) == 0.0);
  const AHMetric ads0 = ads_schwarzschild(3, 0.0);
  CHECK(max_abs(G_tensor(ads0, y).c) <= 1e-10);

  const ScalarFieldPtr f = ah_factor(3, 0.1, 2.0);
  const AHMetric g = ah_conformal(3, 0.1, 2.0);
  Point y3 = y.normalized() * 3.0;
  const Matrix direct = G_tensor(g, y3).c;
  const Matrix formula = G_transform(hyperbolic(3).g, f, 1.0, y3).c;
  CHECK(relative_error(direct, formula, max_abs(g.g->evaluate(y3, 0).g)) <= 1e-8);

  // deviation route against direct curvature where both are accurate
  for (const AHMetric& m : {g, ads_schwarzschild(3, 0.5), ads_schwarzschild(4, 0.25)}) {
    Point p = Point::Constant(m.dimension(), 0.9);
    const Matrix d = deviation_curvature(*m.g, p).G;
    const Matrix c = g_tensor(*m.g, p).c;
    CHECK(max_abs(Matrix(d - c)) <= 1e-12 * std::max(1.0, max_abs(m.g->evaluate(p, 0).g)));
  }
}

TEST_CASE("validate_ah examples") {
  const std::vector<double> rhos = default_rho_schedule();
  const SphereRule rule = sphere_rule(3, 6);
  const DecayReport b = validate_ah(hyperbolic(3), rhos, rule);
  CHECK(b.pass);
  for (const DecayQuantity& q : b.quantities)
    for (double m : q.maxima) CHECK(m <= 1e-13);

  const DecayReport t2 = validate_ah(ah_conformal(3, 0.1, 2.0), rhos, rule);
  CHECK(t2.find("metric")->slope == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(t2.find("metric")->pass);
  CHECK_FALSE(t2.find("scalar_shell")->pass);

  const DecayReport t1 = validate_ah(ah_conformal(3, 0.1, 1.0), rhos, rule);
  CHECK_FALSE(t1.pass);
  CHECK_FALSE(t1.find("metric")->pass);

  const DecayReport t3 = validate_ah(ah_conformal(3, 0.1, 3.0), rhos, rule);
  CHECK(t3.pass);

  const DecayReport ads = validate_ah(ads_schwarzschild(3, 0.5), rhos, rule);
  CHECK(ads.pass);
  CHECK(ads.find("metric")->slope <= -3.0 + 0.1);
}

TEST_CASE("ah_mass_flux examples") {
  const SphereRule rule = sphere_rule(3, 24);
  for (double rho : {3.0, 4.5, 6.0}) CHECK(max_abs(ah_mass_flux(hyperbolic(3), rho, rule)) == 0.0);

  const double a = 0.1;
  const AHMetric g = ah_conformal(3, a, 3.0);
  std::vector<double> values;
  for (double rho : {4.0, 5.0, 6.0}) {
    const Vector flux = ah_mass_flux(g, rho, rule);
    CHECK(flux[0] == doctest::Approx(conformal_flux(3, a, 3.0, rho)).epsilon(1e-8));
    values.push_back(flux[0]);
  }
  const double d1 = values[1] - values[0];
  const double d2 = values[2] - values[1];
  CHECK(std::abs(d2) < 0.5 * std::abs(d1));

  const AdsSchwarzschildRadius rad(3, 0.5);
  for (double rho : {3.0, 4.0, 5.0}) {
    const Vector flux = ah_mass_flux(ads_schwarzschild(3, 0.5), rho, rule);
    CHECK(flux[0] == doctest::Approx(0.5 * std::sinh(rho) / rad.at(rho).r.v).epsilon(1e-10));
    CHECK(max_abs(Vector(flux.tail(3))) <= 1e-12);
  }

  const Vector ser = ah_mass_flux(ads_schwarzschild(3, 0.5), 4.0, rule, FluxNormal::metric, Execution::serial);
  const Vector par = ah_mass_flux(ads_schwarzschild(3, 0.5), 4.0, rule, FluxNormal::metric, Execution::parallel);
  CHECK((ser.array() == par.array()).all());
}

TEST_CASE("ah_mass examples and classification") {
  const std::vector<double> rhos = default_rho_schedule();
  const SphereRule rule = sphere_rule(3, 24);
  const AHMassVector b = ah_mass(hyperbolic(3), rhos, rule);
  CHECK(max_abs(b.M) == 0.0);
  CHECK(b.classification == "zero");

  const AHMassVector ads = ah_mass(ads_schwarzschild(3, 0.5), rhos, rule);
  CHECK(ads.classification == "future-timelike");
  CHECK(std::abs(ads.M[0] - 0.5) <= 1e-3);
  CHECK(max_abs(Vector(ads.M.tail(3))) <= 1e-8);

  const AHMassVector c = ah_mass(ah_conformal(3, 0.05, 3.0), rhos, rule);
  CHECK(max_abs(Vector(c.M.tail(3))) <= 1e-8);
  CHECK(c.M[0] == doctest::Approx(0.025).epsilon(1e-6));

  Vector v(4);
  v << 1.0, 0.2, 0.0, 0.0;
  CHECK(classify_mass(v) == "future-timelike");
  v << -1.0, 0.2, 0.0, 0.0;
  CHECK(classify_mass(v) == "past");
  v << 0.1, 0.3, 0.0, 0.0;
  CHECK(classify_mass(v) == "spacelike");
  v << 0.3, 0.0, 0.3, 0.0;
  CHECK(classify_mass(v) == "null");
  v << 1e-8, 0.0, 0.0, -1e-8;
  CHECK(classify_mass(v) == "zero");
}

TEST_CASE("the background normal gives the same mass") {
  const std::vector<double> rhos = default_rho_schedule();
  const SphereRule rule = sphere_rule(3, 24);
  Vector c(3);
  c << 0.02, -0.01, 0.03;
  for (const AHMetric& g : {ads_schwarzschild(3, 0.5), ah_conformal(3, 0.1, 3.0, c)}) {
    const AHMassVector a = ah_mass(g, rhos, rule, 1e-3, FluxNormal::metric);
    const AHMassVector b = ah_mass(g, rhos, rule, 1e-3, FluxNormal::background);
    CHECK(max_abs(Vector(a.M - b.M)) <= std::max(1e-8, a.error_estimate() + b.error_estimate()));
  }
}

TEST_CASE("check_ah_linearity examples") {
  const std::vector<double> rhos = default_rho_schedule();
  const SphereRule rule = sphere_rule(3, 24);
  const AHLinearity z = check_ah_linearity(ads_schwarzschild(3, 0.5), std::make_shared<ZeroScalar>(3), 0.5, rhos, rule);
  CHECK(max_abs(z.residual) == 0.0);

  const AHLinearity b = check_ah_linearity(hyperbolic(3), ah_factor(3, 0.1, 3.0), 0.5, rhos, rule);
  CHECK(max_abs(Vector(b.deformed.M - 0.5 * b.full.M)) <= 1e-4);

  const AHLinearity ads = check_ah_linearity(ads_schwarzschild(3, 0.5), ah_factor(3, 0.05, 3.0), 0.25, rhos, rule);
  CHECK(max_abs(ads.residual) <= 1e-3);
}

TEST_CASE("check_theorem_ah examples") {
  const std::vector<double> rhos = default_rho_schedule();
  const SphereRule rule = sphere_rule(3, 16);
  std::vector<Point> sample = shell_sample(3, {1.5, 2.5, 4.0}, 4);

  const AHTheoremReport b = check_theorem_ah(hyperbolic(3), std::make_shared<ZeroScalar>(3), 0.5, sample,
                                             std::nullopt, rhos, rule);
  CHECK(b.min_slack == 0.0);
  CHECK(b.classification == "zero");
  CHECK(b.conclusion_holds);

  const AHTheoremReport ads = check_theorem_ah(ads_schwarzschild(3, 0.5), std::make_shared<ZeroScalar>(3), 0.5,
                                               sample, std::nullopt, rhos, rule);
  CHECK(ads.hypothesis_holds);
  CHECK(std::abs(ads.min_slack) <= ads.noise);
  CHECK(ads.classification == "future-timelike");
  CHECK(ads.combined_mass[0] == doctest::Approx(0.5).epsilon(1e-3));

  const AHTheoremReport neg = check_theorem_ah(hyperbolic(3), ah_factor(3, -0.2, 3.0), 0.5, sample, std::nullopt,
                                               rhos, rule);
  CHECK(neg.classification == "past");
  CHECK_FALSE(neg.violation);

  BoundarySpec spec;
  spec.radius = 1.0;
  CHECK_THROWS_AS(check_theorem_ah(hyperbolic(3), std::make_shared<ZeroScalar>(3), 0.5, sample, spec, rhos, rule),
                  UsageError);
  spec.yamabe = 8.0 * M_PI;
  const AHTheoremReport bd = check_theorem_ah(hyperbolic(3), std::make_shared<ZeroScalar>(3), 0.5, sample, spec,
                                              rhos, rule);
  REQUIRE(bd.boundary.has_value());
  const double area = 4.0 * M_PI * std::sinh(1.0) * std::sinh(1.0);
  CHECK(bd.boundary->area_term == doctest::Approx(area).epsilon(1e-10));
  CHECK(bd.boundary->rhs == doctest::Approx(std::sqrt(8.0 * M_PI / 2.0 / area + 1.0)).epsilon(1e-10));
  CHECK(bd.boundary->max_lhs == doctest::Approx(2.0 / std::tanh(1.0)).epsilon(1e-8));
}

TEST_CASE("asymptotic estimates for AH families") {
  const std::vector<double> rhos = default_rho_schedule();
  const SphereRule rule = sphere_rule(3, 6);
  for (const AHMetric& g : {ah_conformal(3, 0.1, 3.0), ads_schwarzschild(3, 0.5), hyperbolic(3)}) {
    const DecayReport r = ah_asymptotics(g, rhos, rule);
    CHECK(r.pass);
  }
  CHECK(validate_ah(ads_schwarzschild(4, 0.25), rhos, sphere_rule(4, 3)).pass);
}

TEST_CASE("extrapolation") {
  std::vector<double> s{3, 3.5, 4, 4.5, 5, 5.5};
  std::vector<double> v;
  for (double x : s) v.push_back(2.0 - 0.7 * std::exp(-1.7 * x));
  const Extrapolation e = extrapolate(s, v, DecayModel::exponential, 1.0, 1e-6);
  CHECK(e.limit == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(e.exponent == doctest::Approx(1.7).epsilon(1e-6));
  CHECK(e.converged);

  std::vector<double> r{32, 64, 128, 256, 512};
  v.clear();
  for (double x : r) v.push_back(-0.25 + 3.0 * std::pow(x, -1.5));
  const Extrapolation p = extrapolate(r, v, DecayModel::power, 1.0, 1e-6);
  CHECK(p.limit == doctest::Approx(-0.25).epsilon(1e-10));
  CHECK(p.exponent == doctest::Approx(1.5).epsilon(1e-6));
  CHECK_THROWS_AS(extrapolate({1, 2, 3}, {1, 1, 1}, DecayModel::power, 1.0, 1e-3), UsageError);
  CHECK_THROWS_AS(extrapolate({1, 3, 2, 4}, {1, 1, 1, 1}, DecayModel::power, 1.0, 1e-3), UsageError);

  const LineFit lf = fit_power_decay({1, 2, 4, 8}, {1, 0.25, 0.0625, 0.015625});
  CHECK(lf.slope == doctest::Approx(-2.0));
}
