#include "confmass/radial.hpp"

#include <cmath>

namespace confmass {

Profile operator*(const Profile& a, const Profile& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

Profile operator+(const Profile& a, const Profile& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }

Profile operator-(const Profile& a, const Profile& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }

Profile scale(const Profile& a, double s) { return {s * a.v, s * a.d1, s * a.d2}; }

Profile over_r2(const Profile& a, double r) {
  const double r2 = r * r;
  return {a.v / r2, a.d1 / r2 - 2.0 * a.v / (r2 * r), a.d2 / r2 - 4.0 * a.d1 / (r2 * r) + 6.0 * a.v / (r2 * r2)};
}

Profile exp_of(const Profile& a) {
  const double e = std::exp(a.v);
  return {e, a.d1 * e, (a.d2 + a.d1 * a.d1) * e};
}

Profile expm1_of(const Profile& a) {
  const double e = std::exp(a.v);
  return {std::expm1(a.v), a.d1 * e, (a.d2 + a.d1 * a.d1) * e};
}

MetricSample radial_tensor(const Point& x, const Profile& b, const Profile& c, int order) {
  const int n = static_cast<int>(x.size());
  const double r = x.norm();
  const Vector th = x / r;
  const Profile e = over_r2(c, r);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix yy = x * x.transpose();

  MetricSample s;
  s.g = b.v * id + e.v * yy;
  if (order >= 1) {
    s.dg.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      Matrix m = b.d1 * th[k] * id + e.d1 * th[k] * yy;
      for (int i = 0; i < n; ++i) {
        m(k, i) += e.v * x[i];
        m(i, k) += e.v * x[i];
      }
      s.dg[static_cast<std::size_t>(k)] = m;
    }
  }
  if (order >= 2) {
    s.ddg.resize(static_cast<std::size_t>(n * n));
    for (int l = 0; l < n; ++l) {
      for (int k = l; k < n; ++k) {
        const double dlk = (l == k) ? 1.0 : 0.0;
        const double proj = (dlk - th[l] * th[k]) / r;
        Matrix m = (b.d2 * th[l] * th[k] + b.d1 * proj) * id + (e.d2 * th[l] * th[k] + e.d1 * proj) * yy;
        for (int i = 0; i < n; ++i) {
          // e' theta_k (delta_il y_j + y_i delta_jl) + e' theta_l (delta_ik y_j + y_i delta_jk)
          m(l, i) += e.d1 * th[k] * x[i];
          m(i, l) += e.d1 * th[k] * x[i];
          m(k, i) += e.d1 * th[l] * x[i];
          m(i, k) += e.d1 * th[l] * x[i];
        }
        // e (delta_ik delta_jl + delta_il delta_jk)
        m(k, l) += e.v;
        m(l, k) += e.v;
        s.ddg[static_cast<std::size_t>(l * n + k)] = m;
        s.ddg[static_cast<std::size_t>(k * n + l)] = m;
      }
    }
  }
  return s;
}

RadialMetric::RadialMetric(Chart chart, ProfileFn b, ProfileFn c, ProfileFn dev_b, ProfileFn dev_c)
    : chart_(chart), b_(std::move(b)), c_(std::move(c)), dev_b_(std::move(dev_b)), dev_c_(std::move(dev_c)) {
  if (!b_ || !c_) throw UsageError("radial metric needs both profiles");
}

MetricSample RadialMetric::evaluate(const Point& x, int order) const {
  chart_.require(x);
  const double r = x.norm();
  return radial_tensor(x, b_(r), c_(r), order);
}

std::optional<MetricSample> RadialMetric::hyperbolic_deviation(const Point& x, int order) const {
  if (!dev_b_ || !dev_c_) return std::nullopt;
  chart_.require(x);
  const double r = x.norm();
  return radial_tensor(x, dev_b_(r), dev_c_(r), order);
}

RadialAngularScalar::RadialAngularScalar(Chart chart, ProfileFn radial, double a, Vector c)
    : chart_(chart), radial_(std::move(radial)), a_(a), c_(std::move(c)) {
  if (c_.size() == 0) c_ = Vector::Zero(chart_.dimension);
  if (c_.size() != chart_.dimension) throw UsageError("angular coefficient vector has wrong length");
}

ScalarSample RadialAngularScalar::evaluate(const Point& x, int order) const {
  chart_.require(x);
  const int n = chart_.dimension;
  const double r = x.norm();
  const Vector th = x / r;
  const Profile rad = radial_(r);
  const double ct = c_.dot(th);
  const double ang = a_ + ct;

  ScalarSample s;
  s.value = rad.v * ang;
  if (order >= 1) {
    const Vector dang = (c_ - ct * th) / r;
    s.grad = rad.d1 * ang * th + rad.v * dang;
    if (order >= 2) {
      const Matrix id = Matrix::Identity(n, n);
      const Matrix tt = th * th.transpose();
      const Matrix ddang = (-(c_ * th.transpose() + th * c_.transpose()) + ct * (3.0 * tt - id)) / (r * r);
      s.hess = rad.d2 * ang * tt + rad.d1 * ang * (id - tt) / r +
               rad.d1 * (th * dang.transpose() + dang * th.transpose()) + rad.v * ddang;
    }
  }
  return s;
}

}  // namespace confmass
