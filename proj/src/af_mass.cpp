#include "confmass/af_mass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace confmass {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNoise = 256.0 * kEps;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

void require_radii(const std::vector<double>& radii, std::size_t minimum, const char* what) {
  if (radii.size() < minimum) throw UsageError(std::string(what) + " needs at least " + std::to_string(minimum) + " radii");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1])) throw UsageError(std::string(what) + ": radii must be strictly increasing");
}

void require_rule(const SphereRule& rule, int n) {
  if (rule.dimension != n) throw UsageError("sphere rule dimension does not match the data");
}

}  // namespace

std::vector<double> geometric_schedule(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 1.0) || count < 1) throw UsageError("geometric schedule needs start > 0, ratio > 1");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(start * std::pow(ratio, k));
  return out;
}

std::vector<double> arithmetic_schedule(double start, double step, int count) {
  if (!(step > 0.0) || count < 1) throw UsageError("arithmetic schedule needs step > 0");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(start + step * k);
  return out;
}

DecayQuantity fit_decay_quantity(std::string name, const std::vector<double>& radii, const std::vector<double>& maxima,
                                 const std::vector<double>& floors, double threshold, DecayModel model,
                                 std::vector<std::string>& notes) {
  DecayQuantity q;
  q.name = std::move(name);
  q.radii = radii;
  q.maxima = maxima;
  q.threshold = threshold;
  std::vector<double> r, v;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (maxima[k] > floors[k]) {
      r.push_back(radii[k]);
      v.push_back(maxima[k]);
    }
  }
  if (r.empty()) {
    q.vanishes = true;
    q.slope = -std::numeric_limits<double>::infinity();
    q.pass = true;
    return q;
  }
  if (r.size() < 2) {
    q.vanishes = true;
    q.slope = -std::numeric_limits<double>::infinity();
    notes.push_back(q.name + ": above the rounding floor at a single radius only, treated as vanishing");
    return q;
  }
  if (r.size() < radii.size()) notes.push_back(q.name + ": fitted on the radii above the rounding floor");
  const LineFit fit = model == DecayModel::power ? fit_power_decay(r, v) : fit_exponential_decay(r, v);
  q.slope = fit.slope;
  q.fit_residual = fit.residual;
  q.pass = fit.slope <= threshold;
  return q;
}

const DecayQuantity* DecayReport::find(const std::string& name) const {
  for (const DecayQuantity& q : quantities)
    if (q.name == name) return &q;
  return nullptr;
}

std::vector<Point> shell_sample(int n, const std::vector<double>& radii, int order) {
  const SphereRule rule = sphere_rule(n, order);
  std::vector<Point> out;
  for (double r : radii)
    for (const Vector& theta : rule.nodes) out.push_back(r * theta);
  return out;
}

DecayReport validate_af(const InitialData& data, const ScalarFieldPtr& f, const std::vector<double>& radii,
                        const SphereRule& rule, double f_tau, Execution execution) {
  require_radii(radii, 4, "validate_af");
  const int n = data.dimension();
  require_rule(rule, n);
  if (f && f->dimension() != n) throw UsageError("conformal factor dimension does not match the data");
  const double ftau = f_tau > 0.0 ? f_tau : data.tau;
  const int nq = f ? 8 : 5;
  const std::size_t nodes = rule.size();

  // Per radius, per quantity: max value and max rounding floor.
  std::vector<std::vector<double>> maxima(at(nq), std::vector<double>(radii.size(), 0.0));
  std::vector<std::vector<double>> floors(at(nq), std::vector<double>(radii.size(), 0.0));
  std::vector<double> values(nodes * at(nq) * 2);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    for_each_index(
        nodes,
        [&](std::size_t q) {
          const Point x = r * rule.nodes[q];
          data.g->chart().require(x);
          double* v = values.data() + q * at(nq) * 2;
          const MetricSample s = data.g->evaluate(x, 1);
          double dg = 0.0;
          for (const Matrix& d : s.dg) dg = std::max(dg, max_abs(d));
          const Matrix kt = data.K->evaluate(x, 0).t;
          const ConstraintPair c = compute_mu_J(*data.g, *data.K, x);
          const MetricAtPoint m(s.g);
          v[0] = max_abs(Matrix(s.g - Matrix::Identity(n, n)));
          v[1] = 4.0 * kEps * max_abs(s.g);
          v[2] = r * dg;
          v[3] = 0.0;
          v[4] = r * max_abs(kt);
          v[5] = 0.0;
          v[6] = std::abs(c.mu);
          v[7] = kNoise * c.mu_scale;
          v[8] = norm(m, c.J);
          v[9] = kNoise * c.J_scale;
          if (f) {
            const HessianLaplacian hl = hessian_laplacian(*data.g, *f, x);
            const ScalarSample fs = f->evaluate(x, 1);
            const double grad = std::sqrt(std::max(0.0, fs.grad.dot(m.inverse() * fs.grad)));
            v[10] = std::abs(fs.value);
            v[11] = 0.0;
            v[12] = r * grad;
            v[13] = 0.0;
            v[14] = r * std::sqrt(std::abs(hl.laplacian));
            v[15] = r * std::sqrt(kNoise * max_abs(fs.hess) * std::max(1.0, max_abs(m.inverse())));
          }
        },
        execution);
    for (std::size_t q = 0; q < nodes; ++q) {
      for (int j = 0; j < nq; ++j) {
        const double* v = values.data() + q * at(nq) * 2 + at(2 * j);
        maxima[at(j)][k] = std::max(maxima[at(j)][k], v[0]);
        floors[at(j)][k] = std::max(floors[at(j)][k], v[1]);
      }
    }
  }

  DecayReport report;
  const double metric_threshold = -data.tau + 0.1;
  const double constraint_threshold = -(n + data.eps) + 0.1;
  const char* names[] = {"metric", "metric_derivative", "extrinsic", "mu", "J",
                         "factor", "factor_gradient", "factor_laplacian"};
  for (int j = 0; j < nq; ++j) {
    const double threshold = j < 3 ? metric_threshold : (j < 5 ? constraint_threshold : -ftau + 0.1);
    report.quantities.push_back(
        fit_decay_quantity(names[j], radii, maxima[at(j)], floors[at(j)], threshold, DecayModel::power, report.notes));
  }
  if (!(2.0 + 2.0 * data.tau > n)) report.notes.push_back("2 + 2 tau > n fails for the stated tau");
  for (const DecayQuantity& q : report.quantities) report.pass = report.pass && q.pass;
  return report;
}

AdmFlux adm_flux(const InitialData& data, double r, const SphereRule& rule, Execution execution) {
  const int n = data.dimension();
  require_rule(rule, n);
  if (n != 3 && n != 4) throw UsageError("ADM flux integrals are implemented for n = 3 and n = 4");
  const double jac = std::pow(r, n - 1);
  const Vector sums = integrate_nodes(
      rule.size(), n + 1,
      [&](std::size_t q, double* out) {
        const Vector& theta = rule.nodes[q];
        const Point x = r * theta;
        data.g->chart().require(x);
        const MetricSample s = data.g->evaluate(x, 1);
        const Matrix k = data.K->evaluate(x, 0).t;
        const MetricAtPoint m(s.g);
        const double w = rule.weights[q] * jac;
        double e = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) e += (s.dg[at(i)](i, j) - s.dg[at(j)](i, i)) * theta[j];
        out[0] = w * e;
        const double tr = (m.inverse().cwiseProduct(k)).sum();
        const Vector p = (k - tr * s.g) * theta;
        for (int i = 0; i < n; ++i) out[i + 1] = w * p[i];
      },
      Summation::pairwise, execution);
  const double area = sphere_area(n);
  AdmFlux out;
  out.E = sums[0] / (2.0 * (n - 1) * area);
  out.P = sums.tail(n) / ((n - 1) * area);
  return out;
}

double EnergyMomentum::error_estimate() const {
  double e = E_fit.error_estimate;
  for (const Extrapolation& p : P_fit) e = std::max(e, p.error_estimate);
  return e;
}

EnergyMomentum adm_energy_momentum(const InitialData& data, const std::vector<double>& radii, const SphereRule& rule,
                                   double tol, Execution execution) {
  require_radii(radii, 4, "adm_energy_momentum");
  const int n = data.dimension();
  EnergyMomentum em;
  em.radii = radii;
  for (double r : radii) em.flux.push_back(adm_flux(data, r, rule, execution));
  std::vector<double> series(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) series[k] = em.flux[k].E;
  em.E_fit = extrapolate(radii, series, DecayModel::power, data.tau, tol);
  em.E = em.E_fit.limit;
  em.P = Vector::Zero(n);
  em.converged = em.E_fit.converged;
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < radii.size(); ++k) series[k] = em.flux[k].P[i];
    em.P_fit.push_back(extrapolate(radii, series, DecayModel::power, data.tau, tol));
    em.P[i] = em.P_fit.back().limit;
    em.converged = em.converged && em.P_fit.back().converged;
  }
  return em;
}

InitialData deformed_data(const InitialData& data, const ScalarFieldPtr& f, double beta) {
  const DeformedData d = deform(data.g, data.K, ConformalFactor(f, beta));
  return InitialData(d.g, d.k, data.tau, data.eps);
}

InitialData fully_deformed_data(const InitialData& data, const ScalarFieldPtr& f) {
  const DeformedData d = deform_full(data.g, data.K, f);
  return InitialData(d.g, d.k, data.tau, data.eps);
}

MassLinearity check_mass_linearity(const InitialData& data, const ScalarFieldPtr& f, double beta,
                                   const std::vector<double>& radii, const SphereRule& rule, double tol,
                                   Execution execution) {
  MassLinearity out;
  out.base = adm_energy_momentum(data, radii, rule, tol, execution);
  out.deformed = adm_energy_momentum(deformed_data(data, f, beta), radii, rule, tol, execution);
  out.full = adm_energy_momentum(fully_deformed_data(data, f), radii, rule, tol, execution);
  out.energy_residual = std::abs(out.deformed.E - (1.0 - beta) * out.base.E - beta * out.full.E);
  out.momentum_residual_bar = max_abs(Vector(out.deformed.P - out.base.P));
  out.momentum_residual_tilde = max_abs(Vector(out.full.P - out.base.P));
  out.extrapolation_error =
      std::max({out.base.error_estimate(), out.deformed.error_estimate(), out.full.error_estimate()});
  return out;
}

SpacetimeTheoremReport check_theorem_spacetime(const InitialData& data, const ScalarFieldPtr& f, double beta,
                                               const std::vector<Point>& sample, const std::vector<double>& radii,
                                               const SphereRule& rule, double tol, Execution execution) {
  if (!(beta > 0.0 && beta <= 1.0)) throw UsageError("beta must lie in (0, 1]");
  const InitialData full = fully_deformed_data(data, f);
  SpacetimeTheoremReport rep;
  rep.slack.assign(sample.size(), 0.0);
  std::vector<double> floors(sample.size(), 0.0);
  for_each_index(
      sample.size(),
      [&](std::size_t p) {
        const Point& x = sample[p];
        const ConstraintPair c = compute_mu_J(*data.g, *data.K, x);
        const ConstraintPair ct = compute_mu_J(*full.g, *full.K, x);
        const double e2f = std::exp(2.0 * f->evaluate(x, 0).value);
        const double jn = norm(MetricAtPoint(data.g->evaluate(x, 0).g), c.J);
        const double jt = norm(MetricAtPoint(full.g->evaluate(x, 0).g), ct.J);
        const double lhs = (1.0 - beta) * c.mu + beta * e2f * ct.mu;
        const double rhs = (1.0 - beta) * jn + beta * e2f * jt;
        rep.slack[p] = lhs - rhs;
        floors[p] = kNoise * ((1.0 - beta) * (c.mu_scale + c.J_scale) + beta * e2f * (ct.mu_scale + ct.J_scale));
      },
      execution);
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < sample.size(); ++p) {
    rep.min_slack = std::min(rep.min_slack, rep.slack[p]);
    rep.noise = std::max(rep.noise, floors[p]);
    rep.hypothesis_holds = rep.hypothesis_holds && rep.slack[p] >= -floors[p];
  }
  if (sample.empty()) rep.min_slack = 0.0;

  rep.masses = check_mass_linearity(data, f, beta, radii, rule, 1e-3, execution);
  rep.combined_energy = (1.0 - beta) * rep.masses.base.E + beta * rep.masses.full.E;
  rep.momentum_norm = rep.masses.base.P.norm();
  rep.conclusion_slack = rep.combined_energy - rep.momentum_norm;
  rep.conclusion_holds = rep.conclusion_slack >= -tol;
  rep.violation = rep.hypothesis_holds && !rep.conclusion_holds;
  rep.rigid = std::abs(rep.combined_energy) <= tol;
  return rep;
}

}  // namespace confmass
