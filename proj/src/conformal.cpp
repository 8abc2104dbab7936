#include "confmass/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "confmass/hyperbolic.hpp"

namespace confmass {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Value, gradient and Hessian of a scalar weight w multiplying a metric sample.
struct Weight {
  double w = 1.0;
  Vector dw;
  Matrix ddw;
};

// w = e^{2 s f} - offset, offset 0 or 1 (the latter through expm1).
Weight exp_weight(const ScalarSample& f, double s, int order, bool minus_one) {
  Weight out;
  const double e = std::exp(2.0 * s * f.value);
  out.w = minus_one ? std::expm1(2.0 * s * f.value) : e;
  if (order >= 1) out.dw = 2.0 * s * e * f.grad;
  if (order >= 2) out.ddw = e * (2.0 * s * f.hess + 4.0 * s * s * f.grad * f.grad.transpose());
  return out;
}

MetricSample weighted(const Weight& w, const MetricSample& g, int order) {
  const int n = g.dimension();
  MetricSample out;
  out.g = w.w * g.g;
  if (order >= 1) {
    out.dg.resize(at(n));
    for (int k = 0; k < n; ++k) out.dg[at(k)] = w.dw[k] * g.g + w.w * g.dg[at(k)];
  }
  if (order >= 2) {
    out.ddg.resize(at(n * n));
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        out.ddg[at(l * n + k)] =
            w.ddw(l, k) * g.g + w.dw[k] * g.dg[at(l)] + w.dw[l] * g.dg[at(k)] + w.w * g.d2(l, k);
  }
  return out;
}

void add_into(MetricSample& a, const MetricSample& b) {
  a.g += b.g;
  for (std::size_t i = 0; i < a.dg.size(); ++i) a.dg[i] += b.dg[i];
  for (std::size_t i = 0; i < a.ddg.size(); ++i) a.ddg[i] += b.ddg[i];
}

struct PointData {
  MetricSample s;
  MetricAtPoint m;
  Christoffel gam;
  ScalarSample f;
  double grad2 = 0.0;  // |df|_g^2
};

PointData point_data(const MetricField& g, const ScalarField& f, const Point& x) {
  MetricSample s = g.evaluate(x, 1);
  MetricAtPoint m(s.g);
  Christoffel gam = christoffel(s, m);
  ScalarSample fs = f.evaluate(x, 2);
  const double grad2 = fs.grad.dot(m.inverse() * fs.grad);
  return {std::move(s), std::move(m), std::move(gam), std::move(fs), grad2};
}

}  // namespace

ConformalFactor::ConformalFactor(ScalarFieldPtr f, double beta) : f_(std::move(f)), beta_(beta) {
  if (!f_) throw UsageError("conformal factor needs a scalar field");
  if (!(beta_ > 0.0 && beta_ <= 1.0)) throw UsageError("conformal exponent beta must lie in (0, 1]");
}

ConformallyDeformedMetric::ConformallyDeformedMetric(MetricFieldPtr g, ScalarFieldPtr f, double s)
    : g_(std::move(g)), f_(std::move(f)), s_(s) {
  if (!g_ || !f_) throw UsageError("conformal deformation needs a metric and a factor");
  if (f_->dimension() != g_->dimension()) throw UsageError("conformal factor dimension differs from the metric");
}

Provenance ConformallyDeformedMetric::provenance() const {
  if (g_->provenance() == Provenance::analytic && f_->provenance() == Provenance::analytic)
    return Provenance::analytic;
  return Provenance::finite_difference;
}

MetricSample ConformallyDeformedMetric::evaluate(const Point& x, int order) const {
  const MetricSample g = g_->evaluate(x, order);
  return weighted(exp_weight(f_->evaluate(x, order), s_, order, false), g, order);
}

std::optional<MetricSample> ConformallyDeformedMetric::hyperbolic_deviation(const Point& x, int order) const {
  std::optional<MetricSample> dev = g_->hyperbolic_deviation(x, order);
  if (!dev) return std::nullopt;
  const ScalarSample f = f_->evaluate(x, order);
  const MetricSample b = HyperbolicMetric(g_->dimension(), 0.0).evaluate(x, order);
  MetricSample out = weighted(exp_weight(f, s_, order, true), b, order);
  add_into(out, weighted(exp_weight(f, s_, order, false), *dev, order));
  return out;
}

ConformallyScaledTensor::ConformallyScaledTensor(SymTensorFieldPtr k, ScalarFieldPtr f, double s)
    : k_(std::move(k)), f_(std::move(f)), s_(s) {
  if (!k_ || !f_) throw UsageError("tensor rescaling needs a tensor and a factor");
  if (k_->index() != IndexType::covariant) throw UsageError("only covariant tensors are rescaled");
}

TensorSample ConformallyScaledTensor::evaluate(const Point& x, int order) const {
  const TensorSample k = k_->evaluate(x, order);
  const ScalarSample f = f_->evaluate(x, order);
  const double e = std::exp(s_ * f.value);
  TensorSample out;
  out.t = e * k.t;
  if (order >= 1) {
    for (std::size_t j = 0; j < k.dt.size(); ++j)
      out.dt.push_back(e * (s_ * f.grad[static_cast<Eigen::Index>(j)] * k.t + k.dt[j]));
  }
  return out;
}

DeformedData deform(const MetricFieldPtr& g, const SymTensorFieldPtr& k, const ConformalFactor& cf) {
  DeformedData out;
  out.g = std::make_shared<ConformallyDeformedMetric>(g, cf.field(), cf.beta());
  if (k) out.k = std::make_shared<ConformallyScaledTensor>(k, cf.field(), cf.beta());
  return out;
}

DeformedData deform_full(const MetricFieldPtr& g, const SymTensorFieldPtr& k, const ScalarFieldPtr& f) {
  return deform(g, k, ConformalFactor(f, 1.0));
}

Christoffel christoffel_transform(const MetricField& g, const ScalarField& f, const Point& x) {
  const int n = g.dimension();
  const MetricSample s = g.evaluate(x, 0);
  const MetricAtPoint m(s.g);
  const ScalarSample fs = f.evaluate(x, 1);
  const Vector fup = m.inverse() * fs.grad;
  Christoffel out;
  out.gamma.assign(at(n), Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    Matrix& d = out.gamma[at(k)];
    d.row(k) += fs.grad.transpose();
    d.col(k) += fs.grad;
    d -= fup[k] * s.g;
  }
  return out;
}

SymTensor2 ricci_transform(const MetricField& g, const ScalarField& f, const Point& x) {
  const double n = g.dimension();
  const PointData p = point_data(g, f, x);
  const CurvaturePoint c = curvature_point(g, x);
  const HessianLaplacian hl = hessian_laplacian(p.gam, p.m, p.f);
  const Matrix r = c.ricci.c - hl.laplacian * p.s.g + (2.0 - n) * hl.hessian.c + (2.0 - n) * p.grad2 * p.s.g +
                   (n - 2.0) * p.f.grad * p.f.grad.transpose();
  return {r, IndexType::covariant};
}

double scalar_transform(const MetricField& g, const ScalarField& f, const Point& x) {
  const double n = g.dimension();
  const PointData p = point_data(g, f, x);
  const CurvaturePoint c = curvature_point(g, x);
  const HessianLaplacian hl = hessian_laplacian(p.gam, p.m, p.f);
  return std::exp(-2.0 * p.f.value) *
         (c.scalar - 2.0 * (n - 1.0) * hl.laplacian - (n - 1.0) * (n - 2.0) * p.grad2);
}

ConstraintPair constraint_transform(const MetricField& g, const SymTensorField& k, const ConformalFactor& cf,
                                    const Point& x) {
  const double n = g.dimension();
  const double b = cf.beta();
  const PointData p = point_data(g, *cf.field(), x);
  const CurvaturePoint c = curvature_point(g, x);
  const TensorSample ks = k.evaluate(x, 1);
  const ConstraintPair base = constraints_at(p.m, p.gam, c, ks);
  const HessianLaplacian hl = hessian_laplacian(p.gam, p.m, p.f);

  const double e2 = std::exp(-2.0 * b * p.f.value);
  const double e3 = std::exp(-3.0 * b * p.f.value);
  ConstraintPair out;
  out.mu = 0.5 * e2 *
           (2.0 * base.mu - 2.0 * (n - 1.0) * b * hl.laplacian - (n - 1.0) * (n - 2.0) * b * b * p.grad2);
  const Matrix kup = p.m.inverse() * ks.t * p.m.inverse();
  out.J = {e3 * (base.J.c + b * (n - 1.0) * kup * p.f.grad), IndexType::contravariant};
  out.mu_scale = e2 * base.mu_scale;
  out.J_scale = e3 * base.J_scale;
  return out;
}

ConvexIdentity constraint_convex_identity(const MetricFieldPtr& g, const SymTensorFieldPtr& k,
                                          const ScalarFieldPtr& f, double beta, const Point& x) {
  const ConformalFactor cf(f, beta);  // validates beta
  const double n = g->dimension();
  const SymTensorFieldPtr kk = k ? k : std::make_shared<ZeroTensor>(g->dimension());
  const DeformedData full = deform_full(g, kk, f);

  ConvexIdentity out;
  out.base = compute_mu_J(*g, *kk, x);
  out.full = compute_mu_J(*full.g, *full.k, x);

  const MetricAtPoint m(g->evaluate(x, 0).g);
  const ScalarSample fs = f->evaluate(x, 1);
  const double grad2 = fs.grad.dot(m.inverse() * fs.grad);
  const double e2b = std::exp(-2.0 * beta * fs.value);
  const double e2 = std::exp(2.0 * fs.value);
  out.mu_bar = e2b * ((1.0 - beta) * out.base.mu + beta * e2 * out.full.mu +
                      0.5 * beta * (1.0 - beta) * (n - 1.0) * (n - 2.0) * grad2);
  out.J_bar = std::exp(-3.0 * beta * fs.value) *
              ((1.0 - beta) * out.base.J.c + beta * std::exp(3.0 * fs.value) * out.full.J.c);

  // |v|_{g-bar} = e^{beta f} |v|_g and |v|_{g~} = e^{f} |v|_g for contravariant v
  auto gnorm = [&m](const Vector& v) { return std::sqrt(v.dot(m.g() * v)); };
  out.J_bar_norm = std::exp(beta * fs.value) * gnorm(out.J_bar);
  out.bound = e2b * ((1.0 - beta) * gnorm(out.base.J.c) + beta * e2 * std::exp(fs.value) * gnorm(out.full.J.c));
  out.within_bound = out.J_bar_norm <= out.bound * (1.0 + 1e-12) + 1e-300;
  return out;
}

double scalar_convex(const MetricFieldPtr& g, const ScalarFieldPtr& f, double beta, const Point& x) {
  const ConformalFactor cf(f, beta);
  const double n = g->dimension();
  const MetricAtPoint m(g->evaluate(x, 0).g);
  const ScalarSample fs = f->evaluate(x, 1);
  const double grad2 = fs.grad.dot(m.inverse() * fs.grad);
  const double s = curvature_point(*g, x).scalar;
  const double s_full = curvature_point(*deform_full(g, nullptr, f).g, x).scalar;
  return std::exp(-2.0 * beta * fs.value) * ((1.0 - beta) * s + beta * std::exp(2.0 * fs.value) * s_full +
                                             beta * (1.0 - beta) * (n - 1.0) * (n - 2.0) * grad2);
}

SymTensor2 G_transform(const MetricFieldPtr& g, const ScalarFieldPtr& f, double beta, const Point& x) {
  const ConformalFactor cf(f, beta);
  const double n = g->dimension();
  const Matrix gg = g->evaluate(x, 0).g;
  const MetricAtPoint m(gg);
  const ScalarSample fs = f->evaluate(x, 1);
  const double grad2 = fs.grad.dot(m.inverse() * fs.grad);
  const MetricFieldPtr full = deform_full(g, nullptr, f).g;
  const Matrix g0 = g_tensor(curvature_point(*g, x), gg);
  const Matrix g1 = g_tensor(curvature_point(*full, x), full->evaluate(x, 0).g);
  // (1-b) + b e^{2f} - e^{2bf} without cancellation
  const double c0 = beta * std::expm1(2.0 * fs.value) - std::expm1(2.0 * beta * fs.value);
  const Matrix out = (1.0 - beta) * g0 + beta * g1 + 0.5 * (n - 1.0) * (n - 2.0) * c0 * gg +
                     0.5 * beta * (beta - 1.0) * (n - 2.0) * (n - 3.0) * grad2 * gg +
                     beta * (beta - 1.0) * (n - 2.0) * fs.grad * fs.grad.transpose();
  return {out, IndexType::covariant};
}

double mean_curvature_transform(double h, double f_nu, double f, double beta, int n) {
  return std::exp(-beta * f) * (h + beta * (n - 1.0) * f_nu);
}

double relative_error(const Matrix& a, const Matrix& b, double scale) {
  const double den = std::max({max_abs(a), max_abs(b), scale});
  return den > 0.0 ? max_abs(Matrix(a - b)) / den : 0.0;
}

double relative_error(double a, double b, double scale) {
  const double den = std::max({std::abs(a), std::abs(b), scale});
  return den > 0.0 ? std::abs(a - b) / den : 0.0;
}

double IdentityResiduals::max() const {
  return std::max({christoffel, ricci, scalar, mu, J, mu_convex, J_convex, scalar_convex, G});
}

IdentityResiduals conformal_identity_residuals(const MetricFieldPtr& g, const SymTensorFieldPtr& k,
                                               const ScalarFieldPtr& f, double beta, const Point& x) {
  const int n = g->dimension();
  const SymTensorFieldPtr kk = k ? k : std::make_shared<ZeroTensor>(n);
  const ConformalFactor cf(f, beta);
  const DeformedData bar = deform(g, kk, cf);
  const ScaledScalar bf(f, beta);
  const double gscale = max_abs(g->evaluate(x, 0).g);

  IdentityResiduals out;
  const Christoffel g0 = christoffel(*g, x);
  const Christoffel g1 = christoffel(*bar.g, x);
  const Christoffel dg = christoffel_transform(*g, bf, x);
  for (int c = 0; c < n; ++c)
    out.christoffel = std::max(out.christoffel, relative_error(Matrix(g1.gamma[at(c)] - g0.gamma[at(c)]),
                                                               dg.gamma[at(c)], gscale));

  const CurvaturePoint direct = curvature_point(*bar.g, x);
  out.ricci = relative_error(direct.ricci.c, ricci_transform(*g, bf, x).c, gscale);
  out.scalar = relative_error(direct.scalar, scalar_transform(*g, bf, x));

  const ConstraintPair cdirect = compute_mu_J(*bar.g, *bar.k, x);
  const ConstraintPair cformula = constraint_transform(*g, *kk, cf, x);
  out.mu = relative_error(cdirect.mu, cformula.mu);
  out.J = relative_error(cdirect.J.c, cformula.J.c, 1.0);

  const ConvexIdentity convex = constraint_convex_identity(g, kk, f, beta, x);
  out.mu_convex = relative_error(cdirect.mu, convex.mu_bar);
  out.J_convex = relative_error(cdirect.J.c, convex.J_bar, 1.0);
  out.J_bound_holds = convex.within_bound;

  out.scalar_convex = relative_error(direct.scalar, scalar_convex(g, f, beta, x));
  out.G = relative_error(g_tensor(direct, bar.g->evaluate(x, 0).g), G_transform(g, f, beta, x).c, gscale);
  return out;
}

}  // namespace confmass
