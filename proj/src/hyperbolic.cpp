#include "confmass/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "confmass/curvature.hpp"

namespace confmass {

Profile hyperbolic_b_profile(double rho) {
  const double sh = std::sinh(rho);
  const Profile s2{sh * sh, std::sinh(2.0 * rho), 2.0 * std::cosh(2.0 * rho)};
  return over_r2(s2, rho);
}

Profile hyperbolic_c_profile(double rho) { return Profile{1.0, 0.0, 0.0} - hyperbolic_b_profile(rho); }

HyperbolicMetric::HyperbolicMetric(int n, double rho_min) : chart_(n, ChartKind::polar_hyperbolic, rho_min) {}

MetricSample HyperbolicMetric::evaluate(const Point& x, int order) const {
  chart_.require(x);
  const double rho = x.norm();
  return radial_tensor(x, hyperbolic_b_profile(rho), hyperbolic_c_profile(rho), order);
}

std::optional<MetricSample> HyperbolicMetric::hyperbolic_deviation(const Point& x, int order) const {
  chart_.require(x);
  return zero_metric_sample(chart_.dimension, order);
}

Matrix tangent_reference(const Point& y0) {
  const int n = static_cast<int>(y0.size());
  Eigen::HouseholderQR<Matrix> qr(Matrix(y0 / y0.norm()));
  Matrix q = qr.householderQ();
  return q.rightCols(n - 1);
}

Matrix hyperbolic_frame(const Point& y, const Matrix& reference) {
  const int n = static_cast<int>(y.size());
  const double rho = y.norm();
  const Vector th = y / rho;
  const double scale = rho / std::sinh(rho);
  Matrix e(n, n);
  e.col(0) = th;
  std::vector<Vector> us;
  for (int a = 0; a < n - 1; ++a) {
    Vector u = reference.col(a) - reference.col(a).dot(th) * th;
    for (const Vector& prev : us) u -= u.dot(prev) * prev;
    u.normalize();
    us.push_back(u);
    e.col(a + 1) = scale * u;
  }
  return e;
}

double lapse(int i, const Point& y) {
  const int n = static_cast<int>(y.size());
  if (i < 0 || i > n) throw UsageError("lapse index out of range");
  const double rho = y.norm();
  if (i == 0) return std::cosh(rho);
  return y[i - 1] / rho * std::sinh(rho);
}

Vector killing_field(int i, const Point& y) {
  const int n = static_cast<int>(y.size());
  if (i < 0 || i > n) throw UsageError("Killing field index out of range");
  const double rho = y.norm();
  const Vector th = y / rho;
  if (i == 0) return std::sinh(rho) * th;
  const int j = i - 1;
  const double a = 1.0 + std::cosh(rho);
  const double b = rho / std::tanh(0.5 * rho);
  Vector x = (a - b) * th[j] * th;
  x[j] += b;
  return x;
}

Matrix killing_field_jacobian(int i, const Point& y) {
  const int n = static_cast<int>(y.size());
  if (i < 0 || i > n) throw UsageError("Killing field index out of range");
  const double rho = y.norm();
  const Vector th = y / rho;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix proj = id - th * th.transpose();
  if (i == 0) {
    const double s = std::sinh(rho) / rho;
    const double ds = std::cosh(rho) / rho - std::sinh(rho) / (rho * rho);
    return s * id + ds * y * th.transpose();
  }
  const int j = i - 1;
  const double a = 1.0 + std::cosh(rho);
  const double da = std::sinh(rho);
  const double half = 0.5 * rho;
  const double b = rho / std::tanh(half);
  const double db = 1.0 / std::tanh(half) - half / (std::sinh(half) * std::sinh(half));
  Matrix jac(n, n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      double v = (da - db) * th[m] * th[j] * th[k];
      if (j == k) v += db * th[m];
      v += (a - b) * (proj(j, m) * th[k] + th[j] * proj(k, m)) / rho;
      jac(k, m) = v;
    }
  }
  return jac;
}

double killing_divergence(int i, const Point& y) {
  const HyperbolicMetric b(static_cast<int>(y.size()), 0.0);
  const Christoffel gam = christoffel(b, y);
  const Vector x = killing_field(i, y);
  const Matrix jac = killing_field_jacobian(i, y);
  double div = jac.trace();
  for (int k = 0; k < gam.dimension(); ++k)
    for (int l = 0; l < gam.dimension(); ++l) div += gam(k, k, l) * x[l];
  return div;
}

double conformal_killing_residual(int i, const Point& y) {
  const int n = static_cast<int>(y.size());
  const HyperbolicMetric b(n, 0.0);
  const MetricSample s = b.evaluate(y, 1);
  const Vector x = killing_field(i, y);
  const Matrix jac = killing_field_jacobian(i, y);
  Matrix transport = s.g * jac + jac.transpose() * s.g;
  Matrix advect = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) advect += x[k] * s.dg[static_cast<std::size_t>(k)];
  const Matrix trace_part = (2.0 / n) * killing_divergence(i, y) * s.g;
  const Matrix res = transport + advect - trace_part;
  // relative to the largest of the three pieces, which grow like e^{3 rho}
  const double scale = std::max({1.0, max_abs(transport), max_abs(advect), max_abs(trace_part)});
  return max_abs(res) / scale;
}

}  // namespace confmass
