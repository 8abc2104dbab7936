#include <cmath>

#include "confmass/curvature.hpp"
#include "confmass/finite_difference.hpp"
#include "confmass/hyperbolic.hpp"
#include "confmass/radial.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confmass;
using testing_support::random_point;
using testing_support::rel_err;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

// e^{2 a x^1} delta with hand-written derivatives.
class ExpLinearMetric final : public MetricField {
 public:
  explicit ExpLinearMetric(double a) : chart_(3, ChartKind::cartesian_end, 0.0), a_(a) {}
  const Chart& chart() const override { return chart_; }
  MetricSample evaluate(const Point& x, int order) const override {
    MetricSample s;
    const Matrix g = std::exp(2.0 * a_ * x[0]) * Matrix::Identity(3, 3);
    s.g = g;
    if (order >= 1) {
      s.dg.assign(3, Matrix::Zero(3, 3));
      s.dg[0] = 2.0 * a_ * g;
    }
    if (order >= 2) {
      s.ddg.assign(9, Matrix::Zero(3, 3));
      s.ddg[0] = 4.0 * a_ * a_ * g;
    }
    return s;
  }

 private:
  Chart chart_;
  double a_;
};

// Hyperbolic metric in spherical coordinates (rho, theta, phi).
class SphericalHyperbolic final : public MetricField {
 public:
  SphericalHyperbolic() : chart_(3, ChartKind::cartesian_end, 0.0) {}
  const Chart& chart() const override { return chart_; }
  MetricSample evaluate(const Point& x, int order) const override {
    const double rho = x[0];
    const double th = x[1];
    const double s2 = std::sinh(rho) * std::sinh(rho);
    const double ds2 = std::sinh(2.0 * rho);
    const double dds2 = 2.0 * std::cosh(2.0 * rho);
    const double q = std::sin(th) * std::sin(th);
    const double dq = std::sin(2.0 * th);
    const double ddq = 2.0 * std::cos(2.0 * th);
    MetricSample s;
    s.g = Matrix::Zero(3, 3);
    s.g(0, 0) = 1.0;
    s.g(1, 1) = s2;
    s.g(2, 2) = s2 * q;
    if (order >= 1) {
      s.dg.assign(3, Matrix::Zero(3, 3));
      s.dg[0](1, 1) = ds2;
      s.dg[0](2, 2) = ds2 * q;
      s.dg[1](2, 2) = s2 * dq;
    }
    if (order >= 2) {
      s.ddg.assign(9, Matrix::Zero(3, 3));
      s.ddg[0](1, 1) = dds2;
      s.ddg[0](2, 2) = dds2 * q;
      s.ddg[1](2, 2) = ds2 * dq;
      s.ddg[3](2, 2) = ds2 * dq;
      s.ddg[4](2, 2) = s2 * ddq;
    }
    return s;
  }

 private:
  Chart chart_;
};

// T^ij = x^i x^j
class OuterTensor final : public SymTensorField {
 public:
  int dimension() const override { return 3; }
  IndexType index() const override { return IndexType::contravariant; }
  TensorSample evaluate(const Point& x, int order) const override {
    TensorSample t;
    t.t = x * x.transpose();
    if (order >= 1) {
      for (int k = 0; k < 3; ++k) {
        Matrix d = Matrix::Zero(3, 3);
        d.row(k) += x.transpose();
        d.col(k) += x;
        t.dt.push_back(d);
      }
    }
    return t;
  }
};

class IdentityTensor final : public SymTensorField {
 public:
  int dimension() const override { return 3; }
  IndexType index() const override { return IndexType::contravariant; }
  TensorSample evaluate(const Point&, int order) const override {
    TensorSample t;
    t.t = Matrix::Identity(3, 3);
    if (order >= 1) t.dt.assign(3, Matrix::Zero(3, 3));
    return t;
  }
};

std::shared_ptr<RadialMetric> schwarzschild(double m) {
  auto b = [m](double r) {
    const Profile u{1.0 + m / (2.0 * r), -m / (2.0 * r * r), m / (r * r * r)};
    const Profile u2 = u * u;
    return u2 * u2;
  };
  auto c = [](double) { return Profile{}; };
  return std::make_shared<RadialMetric>(Chart(3, ChartKind::cartesian_end, m / 4.0), b, c);
}

}  // namespace

TEST_CASE("christoffel symbols of flat and exponentially rescaled metrics") {
  const ConstantMetric flat(Chart(3, ChartKind::cartesian_end, 0.0), Matrix::Identity(3, 3));
  const Christoffel g0 = christoffel(flat, vec3(1, 2, 3));
  for (const Matrix& m : g0.gamma) CHECK(max_abs(m) == 0.0);

  const double a = 0.37;
  const ExpLinearMetric g(a);
  const Christoffel gam = christoffel(g, vec3(0.2, -0.4, 0.9));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expected =
            a * ((j == 0) * (k == i) + (i == 0) * (k == j) - (k == 0) * (i == j));
        CHECK(std::abs(gam(k, i, j) - expected) < 1e-14);
        CHECK(gam(k, i, j) == gam(k, j, i));
      }
}

TEST_CASE("hyperbolic metric in spherical coordinates") {
  const SphericalHyperbolic b;
  const Point x = vec3(1.3, 0.8, 0.4);
  const Christoffel gam = christoffel(b, x);
  CHECK(gam(0, 1, 1) == doctest::Approx(-std::sinh(1.3) * std::cosh(1.3)).epsilon(1e-14));
  const CurvaturePoint c = curvature_point(b, x);
  const Matrix g = b.evaluate(x, 0).g;
  CHECK(rel_err(c.ricci.c, Matrix(-2.0 * g)) < 1e-12);
  CHECK(c.scalar == doctest::Approx(-6.0).epsilon(1e-12));
}

TEST_CASE("hyperbolic metric in normal coordinates has constant curvature -1") {
  std::mt19937_64 rng(3);
  for (int n : {3, 4, 5}) {
    const HyperbolicMetric b(n);
    for (int trial = 0; trial < 20; ++trial) {
      const Point y = random_point(rng, n, 0.3, 6.0);
      const CurvaturePoint c = curvature_point(b, y);
      const Matrix g = b.evaluate(y, 0).g;
      CHECK(rel_err(c.ricci.c, Matrix(-(n - 1.0) * g), max_abs(g)) < 1e-10);
      CHECK(rel_err(c.scalar, -n * (n - 1.0)) < 1e-10);
      CHECK(max_abs(g_tensor(b, y).c) < 1e-10 * max_abs(g));
    }
  }
}

TEST_CASE("scalar curvature is the trace of Ricci") {
  std::mt19937_64 rng(5);
  const auto g = schwarzschild(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = random_point(rng, 3, 0.6, 20.0);
    const CurvaturePoint c = curvature_point(*g, x);
    const MetricAtPoint m(g->evaluate(x, 0).g);
    CHECK(rel_err(c.scalar, trace(m, c.ricci)) < 1e-10);
  }
  CHECK(std::abs(curvature_point(*g, vec3(3, 4, 0)).scalar) < 1e-8);
}

TEST_CASE("finite-difference provenance reproduces analytic curvature") {
  const HyperbolicMetric b(3);
  const FiniteDifferenceMetric fd(b.chart(), [&b](const Point& y) { return Matrix(b.evaluate(y, 0).g); });
  const Point y = vec3(0.7, -0.5, 0.9);
  const CurvaturePoint c = curvature_point(fd, y);
  CHECK(std::abs(c.scalar + 6.0) < 1e-6);
}

TEST_CASE("hessian and laplacian") {
  const ConstantMetric flat(Chart(3, ChartKind::cartesian_end, 0.0), Matrix::Identity(3, 3));
  const FiniteDifferenceScalar sq(flat.chart(), [](const Point& y) { return y.squaredNorm(); });
  const HessianLaplacian h = hessian_laplacian(flat, sq, vec3(0.5, 1, -2));
  CHECK(max_abs(Matrix(h.hessian.c - 2.0 * Matrix::Identity(3, 3))) < 1e-8);
  CHECK(h.laplacian == doctest::Approx(6.0));

  const RadialAngularScalar inv(Chart(3, ChartKind::cartesian_end, 0.1),
                                [](double r) { return Profile{1.0 / r, -1.0 / (r * r), 2.0 / (r * r * r)}; }, 1.0,
                                Vector());
  CHECK(std::abs(hessian_laplacian(flat, inv, vec3(0.5, 1, -2)).laplacian) < 1e-10);

  const HyperbolicMetric b(3);
  const RadialAngularScalar ch(b.chart(), [](double r) { return Profile{std::cosh(r), std::sinh(r), std::cosh(r)}; },
                               1.0, Vector());
  const Point y = vec3(1.0, 0.4, -0.2);
  const double rho = y.norm();
  CHECK(rel_err(hessian_laplacian(b, ch, y).laplacian, 3.0 * std::cosh(rho)) < 1e-12);
}

TEST_CASE("divergence of symmetric tensors in flat space") {
  const ConstantMetric flat(Chart(3, ChartKind::cartesian_end, 0.0), Matrix::Identity(3, 3));
  const Point x = vec3(0.3, -1.2, 2.0);
  CHECK(max_abs(divergence_sym2(flat, IdentityTensor(), x).c) == 0.0);
  CHECK(max_abs(Vector(divergence_sym2(flat, OuterTensor(), x).c - 4.0 * x)) < 1e-14);
}

TEST_CASE("mean curvature of level sets") {
  const ConstantMetric flat(Chart(3, ChartKind::cartesian_end, 0.0), Matrix::Identity(3, 3));
  CHECK(mean_curvature(flat, LevelSurface{2.0}, vec3(0, 2, 0), Orientation::outward) == doctest::Approx(1.0));
  CHECK(mean_curvature(flat, LevelSurface{2.0}, vec3(0, 2, 0), Orientation::inward) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(mean_curvature(flat, LevelSurface{2.0}, vec3(0, 3, 0), Orientation::outward), UsageError);

  const HyperbolicMetric b(3);
  const Point y = vec3(0.6, 0.0, 0.8);
  CHECK(mean_curvature(b, LevelSurface{1.0}, y, Orientation::outward) ==
        doctest::Approx(2.0 / std::tanh(1.0)).epsilon(1e-12));

  const auto s = schwarzschild(1.0);
  CHECK(std::abs(mean_curvature(*s, LevelSurface{0.5}, vec3(0.3, 0.4, 0.0), Orientation::outward)) < 1e-8);
  // H(r) = (1 + m/2r)^{-3} (2/r) (1 - m/2r)
  const double r = 3.0;
  const double u = 1.0 + 0.5 / r;
  CHECK(mean_curvature(*s, LevelSurface{r}, vec3(0, 0, r), Orientation::outward) ==
        doctest::Approx(std::pow(u, -3.0) * (2.0 / r) * (1.0 - 0.5 / r)).epsilon(1e-12));
}
