#include "confmass/ah_mass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace confmass {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNoise = 256.0 * kEps;
constexpr double kFrameStep = 2e-3;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

void require_schedule(const std::vector<double>& rhos, std::size_t minimum, const char* what) {
  if (rhos.size() < minimum)
    throw UsageError(std::string(what) + " needs at least " + std::to_string(minimum) + " schedule values");
  for (std::size_t k = 1; k < rhos.size(); ++k)
    if (!(rhos[k] > rhos[k - 1])) throw UsageError(std::string(what) + ": schedule must be strictly increasing");
}

MetricSample deviation_sample(const MetricField& g, const HyperbolicMetric& b, const Point& y, int order) {
  if (std::optional<MetricSample> d = g.hyperbolic_deviation(y, order)) return *d;
  MetricSample s = g.evaluate(y, order);
  const MetricSample bs = b.evaluate(y, order);
  s.g -= bs.g;
  for (std::size_t k = 0; k < s.dg.size(); ++k) s.dg[k] -= bs.dg[k];
  for (std::size_t k = 0; k < s.ddg.size(); ++k) s.ddg[k] -= bs.ddg[k];
  return s;
}

// Fourth-order difference of F along the coordinate vector v (not normalized).
template <class Fn>
Matrix along(const Fn& F, const Point& y, const Vector& v, double h) {
  const double t = h / v.norm();
  return (8.0 * (F(Point(y + t * v)) - F(Point(y - t * v))) - (F(Point(y + 2 * t * v)) - F(Point(y - 2 * t * v)))) /
         (12.0 * t);
}

double sphere_jacobian(double rho, int n) { return std::pow(rho, n - 1); }

}  // namespace

DeviationCurvature deviation_curvature(const MetricField& g, const Point& y) {
  const int n = g.dimension();
  g.chart().require(y);
  const HyperbolicMetric b(n, 0.0);
  const MetricSample bs = b.evaluate(y, 2);
  const MetricSample ds = deviation_sample(g, b, y, 2);
  const MetricAtPoint mb(bs.g);
  const Christoffel gb = christoffel(bs, mb);
  const ChristoffelDerivative dgb = christoffel_derivative(bs, mb, gb);

  DeviationCurvature out;
  out.deviation = ds.g;
  out.metric = bs.g + ds.g;
  const MetricAtPoint m(out.metric);
  const Matrix& gi = m.inverse();

  // A_{l,ij} = Gamma_{l,ij}(D) - D_la Gamma(b)^a_ij and its partial derivatives.
  std::vector<Matrix> a(at(n), Matrix::Zero(n, n));
  std::vector<std::vector<Matrix>> da(at(n), std::vector<Matrix>(at(n), Matrix::Zero(n, n)));
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double v = 0.5 * (ds.dg[at(i)](j, l) + ds.dg[at(j)](i, l) - ds.dg[at(l)](i, j));
        for (int c = 0; c < n; ++c) v -= ds.g(l, c) * gb(c, i, j);
        a[at(l)](i, j) = v;
        a[at(l)](j, i) = v;
        for (int q = 0; q < n; ++q) {
          double w = 0.5 * (ds.d2(q, i)(j, l) + ds.d2(q, j)(i, l) - ds.d2(q, l)(i, j));
          for (int c = 0; c < n; ++c) w -= ds.dg[at(q)](l, c) * gb(c, i, j) + ds.g(l, c) * dgb[at(q)](c, i, j);
          da[at(q)][at(l)](i, j) = w;
          da[at(q)][at(l)](j, i) = w;
        }
      }
    }
  }
  Christoffel dgam;
  dgam.gamma.assign(at(n), Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) dgam.gamma[at(k)] += gi(k, l) * a[at(l)];
  std::vector<Christoffel> ddgam(at(n));
  for (int q = 0; q < n; ++q) {
    const Matrix dgi = -gi * (bs.dg[at(q)] + ds.dg[at(q)]) * gi;
    ddgam[at(q)].gamma.assign(at(n), Matrix::Zero(n, n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        ddgam[at(q)].gamma[at(k)] += dgi(k, l) * a[at(l)] + gi(k, l) * da[at(q)][at(l)];
  }

  // dRic_ij = d_k dG^k_ij - d_i dG^k_kj + (Gamma_g Gamma_g - Gamma_b Gamma_b) terms.
  Matrix ric = Matrix::Zero(n, n);
  Matrix mag = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      double s = 0.0;
      auto add = [&](double t) {
        v += t;
        s += std::abs(t);
      };
      for (int k = 0; k < n; ++k) {
        add(ddgam[at(k)](k, i, j));
        add(-ddgam[at(i)](k, k, j));
        for (int l = 0; l < n; ++l) {
          const double gg_lij = gb(l, i, j) + dgam(l, i, j);
          const double gg_lkj = gb(l, k, j) + dgam(l, k, j);
          add(dgam(k, k, l) * gg_lij + gb(k, k, l) * dgam(l, i, j));
          add(-(dgam(k, i, l) * gg_lkj + gb(k, i, l) * dgam(l, k, j)));
        }
      }
      ric(i, j) = ric(j, i) = v;
      mag(i, j) = mag(j, i) = s;
    }
  }
  out.ricci = ric;
  out.ricci_scale = max_abs(mag);
  const Matrix gid = gi * ds.g;
  out.scalar = gi.cwiseProduct(ric).sum() + (n - 1) * gid.trace();
  out.scalar_scale = gi.cwiseAbs().cwiseProduct(mag).sum() + (n - 1) * (gi.cwiseAbs() * ds.g.cwiseAbs()).trace();
  out.G = ric - 0.5 * out.scalar * out.metric + (n - 1) * ds.g;
  return out;
}

SymTensor2 G_tensor(const AHMetric& g, const Point& y) { return SymTensor2{deviation_curvature(*g.g, y).G}; }

std::vector<double> default_rho_schedule() { return arithmetic_schedule(3.0, 0.5, 6); }

DecayReport validate_ah(const AHMetric& g, const std::vector<double>& rhos, const SphereRule& rule,
                        Execution execution) {
  require_schedule(rhos, 4, "validate_ah");
  const int n = g.dimension();
  if (rule.dimension != n) throw UsageError("sphere rule dimension does not match the metric");
  const HyperbolicMetric b(n, 0.0);
  const std::size_t nodes = rule.size();

  std::vector<std::vector<double>> maxima(3, std::vector<double>(rhos.size(), 0.0));
  std::vector<std::vector<double>> floors(3, std::vector<double>(rhos.size(), 0.0));
  std::vector<double> values(nodes * 6);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    for_each_index(
        nodes,
        [&](std::size_t q) {
          const Point y = rhos[k] * rule.nodes[q];
          g.g->chart().require(y);
          const Matrix ref = tangent_reference(y);
          auto frame_dev = [&](const Point& p) {
            const Matrix e = hyperbolic_frame(p, ref);
            return Matrix(e.transpose() * deviation_sample(*g.g, b, p, 0).g * e);
          };
          const Matrix e = hyperbolic_frame(y, ref);
          const Matrix f0 = frame_dev(y);
          double d1 = 0.0;
          double d2 = 0.0;
          for (int c = 0; c < n; ++c) {
            auto first = [&](const Point& p) { return along(frame_dev, p, hyperbolic_frame(p, ref).col(c), kFrameStep); };
            d1 = std::max(d1, max_abs(first(y)));
            for (int l = 0; l < n; ++l) d2 = std::max(d2, max_abs(along(first, y, e.col(l), kFrameStep)));
          }
          const double scale = max_abs(f0);
          double* v = values.data() + q * 6;
          v[0] = scale;
          v[1] = 0.0;
          v[2] = d1;
          v[3] = 64.0 * kEps * scale / kFrameStep;
          v[4] = d2;
          v[5] = 64.0 * kEps * scale / (kFrameStep * kFrameStep);
        },
        execution);
    for (std::size_t q = 0; q < nodes; ++q)
      for (std::size_t j = 0; j < 3; ++j) {
        maxima[j][k] = std::max(maxima[j][k], values[q * 6 + 2 * j]);
        floors[j][k] = std::max(floors[j][k], values[q * 6 + 2 * j + 1]);
      }
  }

  DecayReport report;
  const double threshold = std::min(-g.tau + 0.05, -0.5 * n);
  const char* names[] = {"metric", "frame_derivative", "frame_second_derivative"};
  for (std::size_t j = 0; j < 3; ++j)
    report.quantities.push_back(
        fit_decay_quantity(names[j], rhos, maxima[j], floors[j], threshold, DecayModel::exponential, report.notes));
  if (!(g.tau > 0.5 * n)) report.notes.push_back("stated tau does not exceed n/2");

  // Shells int_{rho_k}^{rho_k+1} |S + n(n-1)| e^rho dv_b.
  const Rule1D gl = gauss_legendre(4);
  std::vector<double> mids, shells, shell_floor;
  for (std::size_t k = 0; k + 1 < rhos.size(); ++k) {
    const double lo = rhos[k];
    const double hi = rhos[k + 1];
    double total = 0.0;
    for (std::size_t p = 0; p < gl.x.size(); ++p) {
      const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[p];
      const double weight = 0.5 * (hi - lo) * gl.w[p] * std::exp(rho) * std::pow(std::sinh(rho), n - 1);
      const Vector s = integrate_nodes(
          nodes, 1,
          [&](std::size_t q, double* out) {
            const DeviationCurvature dc = deviation_curvature(*g.g, rho * rule.nodes[q]);
            const double v = std::abs(dc.scalar) <= kNoise * dc.scalar_scale ? 0.0 : std::abs(dc.scalar);
            out[0] = rule.weights[q] * v;
          },
          Summation::compensated, execution);
      total += weight * s[0];
    }
    mids.push_back(0.5 * (lo + hi));
    shells.push_back(total);
    shell_floor.push_back(0.0);
  }
  DecayQuantity shell =
      fit_decay_quantity("scalar_shell", mids, shells, shell_floor, 0.0, DecayModel::exponential, report.notes);
  if (!shell.vanishes) shell.pass = shell.slope < 0.0;
  report.quantities.push_back(shell);
  for (const DecayQuantity& q : report.quantities) report.pass = report.pass && q.pass;
  return report;
}

Vector ah_mass_flux(const AHMetric& g, double rho, const SphereRule& rule, FluxNormal normal, Execution execution) {
  const int n = g.dimension();
  if (n != 3 && n != 4) throw UsageError("AH mass integrals are implemented for n = 3 and n = 4");
  if (rule.dimension != n) throw UsageError("sphere rule dimension does not match the metric");
  const double cn = 1.0 / ((n - 1) * (n - 2) * sphere_area(n));
  const double jac = sphere_jacobian(rho, n);
  const double sinh_pow = std::pow(std::sinh(rho), n - 1);
  return integrate_nodes(
      rule.size(), n + 1,
      [&](std::size_t q, double* out) {
        const Vector& theta = rule.nodes[q];
        const Point y = rho * theta;
        const DeviationCurvature dc = deviation_curvature(*g.g, y);
        Vector gnu;  // G(., nu) dsigma / dsigma_unit
        if (normal == FluxNormal::metric) {
          const MetricAtPoint m(dc.metric);
          // nu = g^{-1} theta / s and dsigma = sqrt(det g) s rho^{n-1} with s = |theta|_g.
          gnu = dc.G * (m.inverse() * theta) * (std::sqrt(m.det()) * jac);
        } else {
          gnu = dc.G * theta * sinh_pow;
        }
        for (int i = 0; i <= n; ++i) out[i] = -cn * rule.weights[q] * killing_field(i, y).dot(gnu);
      },
      Summation::compensated, execution);
}

std::string classify_mass(const Vector& m, double band) {
  const double m0 = m[0];
  const double spatial = m.tail(m.size() - 1).norm();
  if (std::max(std::abs(m0), spatial) <= band) return "zero";
  if (std::abs(std::abs(m0) - spatial) <= band) return "null";
  if (spatial > std::abs(m0)) return "spacelike";
  return m0 > 0.0 ? "future-timelike" : "past";
}

double AHMassVector::error_estimate() const {
  double e = 0.0;
  for (const Extrapolation& f : fits) e = std::max(e, f.error_estimate);
  return e;
}

AHMassVector ah_mass(const AHMetric& g, const std::vector<double>& rhos, const SphereRule& rule, double tol,
                     FluxNormal normal, Execution execution) {
  require_schedule(rhos, 4, "ah_mass");
  const int n = g.dimension();
  AHMassVector out;
  out.rhos = rhos;
  for (double rho : rhos) out.flux.push_back(ah_mass_flux(g, rho, rule, normal, execution));
  out.M = Vector::Zero(n + 1);
  std::vector<double> series(rhos.size());
  for (int i = 0; i <= n; ++i) {
    for (std::size_t k = 0; k < rhos.size(); ++k) series[k] = out.flux[k][i];
    out.fits.push_back(extrapolate(rhos, series, DecayModel::exponential, 1.0, tol));
    out.M[i] = out.fits.back().limit;
    out.converged = out.converged && out.fits.back().converged;
  }
  out.classification = classify_mass(out.M);
  return out;
}

AHMetric deformed_metric(const AHMetric& g, const ScalarFieldPtr& f, double beta) {
  const ConformalFactor cf(f, beta);
  return AHMetric(std::make_shared<ConformallyDeformedMetric>(g.g, cf.field(), cf.beta()), g.tau);
}

AHLinearity check_ah_linearity(const AHMetric& g, const ScalarFieldPtr& f, double beta, const std::vector<double>& rhos,
                               const SphereRule& rule, double tol, Execution execution) {
  AHLinearity out;
  out.base = ah_mass(g, rhos, rule, tol, FluxNormal::metric, execution);
  out.deformed = ah_mass(deformed_metric(g, f, beta), rhos, rule, tol, FluxNormal::metric, execution);
  out.full = ah_mass(deformed_metric(g, f, 1.0), rhos, rule, tol, FluxNormal::metric, execution);
  out.residual = out.deformed.M - (1.0 - beta) * out.base.M - beta * out.full.M;
  out.extrapolation_error =
      std::max({out.base.error_estimate(), out.deformed.error_estimate(), out.full.error_estimate()});
  return out;
}

namespace {

BoundaryCheck boundary_check(const AHMetric& g, const ScalarFieldPtr& f, double beta, const BoundarySpec& spec) {
  const int n = g.dimension();
  const SphereRule rule = sphere_rule(n, spec.order);
  const Orientation other = spec.orientation == Orientation::outward ? Orientation::inward : Orientation::outward;
  BoundaryCheck out;
  std::vector<double> area(rule.size());
  double lhs = -std::numeric_limits<double>::infinity();
  double lhs_other = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vector& theta = rule.nodes[q];
    const Point y = spec.radius * theta;
    const MetricAtPoint m(g.g->evaluate(y, 0).g);
    const ScalarSample fs = f->evaluate(y, 1);
    const double s = std::sqrt(theta.dot(m.inverse() * theta));
    area[q] = rule.weights[q] * std::exp(beta * (n - 1) * fs.value) * std::sqrt(m.det()) * s *
              std::pow(spec.radius, n - 1);
    for (Orientation o : {spec.orientation, other}) {
      const double h = mean_curvature(*g.g, LevelSurface{spec.radius}, y, o);
      const double fnu = fs.grad.dot(unit_normal(m, y, o));
      const double v = mean_curvature_transform(h, fnu, fs.value, beta, n);
      double& target = o == spec.orientation ? lhs : lhs_other;
      target = std::max(target, v);
    }
  }
  out.area_term = compensated_sum(area);
  out.rhs = std::sqrt(spec.yamabe / ((n - 1) * (n - 2)) * std::pow(out.area_term, -2.0 / (n - 1)) + 1.0);
  out.max_lhs = lhs;
  out.slack = out.rhs - lhs;
  out.slack_opposite = out.rhs - lhs_other;
  out.holds = out.slack >= -1e-12 * std::max(1.0, out.rhs);
  return out;
}

}  // namespace

AHTheoremReport check_theorem_ah(const AHMetric& g, const ScalarFieldPtr& f, double beta,
                                 const std::vector<Point>& sample, const std::optional<BoundarySpec>& boundary,
                                 const std::vector<double>& rhos, const SphereRule& rule, double tol,
                                 Execution execution) {
  if (!(beta > 0.0 && beta <= 1.0)) throw UsageError("beta must lie in (0, 1]");
  if (boundary && !(boundary->yamabe > 0.0))
    throw UsageError("a boundary needs a positive Yamabe invariant (yamabe)");
  const int n = g.dimension();
  const AHMetric full = deformed_metric(g, f, 1.0);
  AHTheoremReport rep;
  rep.slack.assign(sample.size(), 0.0);
  std::vector<double> floors(sample.size(), 0.0);
  const double nn = n * (n - 1.0);
  for_each_index(
      sample.size(),
      [&](std::size_t p) {
        const Point& y = sample[p];
        const DeviationCurvature c = deviation_curvature(*g.g, y);
        const DeviationCurvature ct = deviation_curvature(*full.g, y);
        const double fv = f->evaluate(y, 0).value;
        const double w = std::exp(-2.0 * beta * fv);
        const double e2f = std::exp(2.0 * fv);
        // e^{-2bf}((1-b) S + b e^{2f} S~) + n(n-1) with S = dS - n(n-1).
        const double background = std::expm1(-2.0 * beta * fv) + w * beta * std::expm1(2.0 * fv);
        rep.slack[p] = w * ((1.0 - beta) * c.scalar + beta * e2f * ct.scalar) - nn * background;
        floors[p] = kNoise * (w * ((1.0 - beta) * c.scalar_scale + beta * e2f * ct.scalar_scale) +
                              nn * std::abs(background) + nn * kEps);
      },
      execution);
  rep.min_slack = sample.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < sample.size(); ++p) {
    rep.min_slack = std::min(rep.min_slack, rep.slack[p]);
    rep.noise = std::max(rep.noise, floors[p]);
    rep.hypothesis_holds = rep.hypothesis_holds && rep.slack[p] >= -floors[p];
  }
  if (boundary) rep.boundary = boundary_check(g, f, beta, *boundary);

  rep.base = ah_mass(g, rhos, rule, tol, FluxNormal::metric, execution);
  rep.full = ah_mass(full, rhos, rule, tol, FluxNormal::metric, execution);
  rep.combined_mass = (1.0 - beta) * rep.base.M + beta * rep.full.M;
  rep.classification = classify_mass(rep.combined_mass);
  rep.conclusion_holds = rep.classification == "future-timelike" || rep.classification == "zero";
  const bool hypotheses = rep.hypothesis_holds && (!rep.boundary || rep.boundary->holds);
  rep.violation = hypotheses && !rep.conclusion_holds;
  return rep;
}

DecayReport ah_asymptotics(const AHMetric& g, const std::vector<double>& rhos, const SphereRule& rule,
                           Execution execution) {
  require_schedule(rhos, 4, "ah_asymptotics");
  const int n = g.dimension();
  if (rule.dimension != n) throw UsageError("sphere rule dimension does not match the metric");
  const HyperbolicMetric b(n, 0.0);
  const std::size_t nodes = rule.size();
  std::vector<std::vector<double>> maxima(4, std::vector<double>(rhos.size(), 0.0));
  std::vector<std::vector<double>> floors(4, std::vector<double>(rhos.size(), 0.0));
  std::vector<double> values(nodes * 8);
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    for_each_index(
        nodes,
        [&](std::size_t q) {
          const Vector& theta = rule.nodes[q];
          const Point y = rhos[k] * theta;
          const DeviationCurvature dc = deviation_curvature(*g.g, y);
          const Matrix bg = b.evaluate(y, 0).g;
          const MetricAtPoint m(dc.metric);
          const MetricAtPoint mb(bg);
          const Vector gid_theta = m.inverse() * (dc.deviation * theta);
          const double t = theta.dot(gid_theta);  // 1 - |theta|_g^2
          const double inv_s_minus_1 = std::expm1(-0.5 * std::log1p(-t));
          const Vector dnu = inv_s_minus_1 * theta - (1.0 + inv_s_minus_1) * gid_theta;
          const double nu_dev = std::sqrt(std::max(0.0, dnu.dot(bg * dnu)));
          const Matrix rel = mb.inverse() * dc.deviation;
          const Eigen::PartialPivLU<Matrix> lu(Matrix(Matrix::Identity(n, n) + rel));
          double logdet = 0.0;
          for (int i = 0; i < n; ++i) logdet += std::log(std::abs(lu.matrixLU()(i, i)));
          const double area_dev = std::abs(std::expm1(0.5 * logdet + 0.5 * std::log1p(-t)));
          const Matrix e = hyperbolic_frame(y);
          const double ric_dev = (e.transpose() * dc.ricci * e).norm();
          double* v = values.data() + q * 8;
          v[0] = nu_dev;
          v[1] = kNoise;
          v[2] = area_dev;
          v[3] = kNoise;
          v[4] = ric_dev;
          v[5] = kNoise * dc.ricci_scale * e.squaredNorm();
          v[6] = std::abs(dc.scalar);
          v[7] = kNoise * dc.scalar_scale;
        },
        execution);
    for (std::size_t q = 0; q < nodes; ++q)
      for (std::size_t j = 0; j < 4; ++j) {
        maxima[j][k] = std::max(maxima[j][k], values[q * 8 + 2 * j]);
        floors[j][k] = std::max(floors[j][k], values[q * 8 + 2 * j + 1]);
      }
  }
  DecayReport report;
  const double threshold = -g.tau + 0.1;
  const char* names[] = {"normal", "area_element", "ricci", "scalar"};
  for (std::size_t j = 0; j < 4; ++j)
    report.quantities.push_back(
        fit_decay_quantity(names[j], rhos, maxima[j], floors[j], threshold, DecayModel::exponential, report.notes));
  for (const DecayQuantity& q : report.quantities) report.pass = report.pass && q.pass;
  return report;
}

}  // namespace confmass
