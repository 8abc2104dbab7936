#include <cmath>

#include "confmass/finite_difference.hpp"
#include "confmass/hyperbolic.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confmass;
using testing_support::random_point;

TEST_CASE("frame is b-orthonormal and Killing data satisfy div X = n V") {
  std::mt19937_64 rng(17);
  for (int n : {3, 4}) {
    const HyperbolicMetric b(n);
    for (int trial = 0; trial < 200; ++trial) {
      const Point y = random_point(rng, n, 0.2, 8.0);
      const Matrix e = hyperbolic_frame(y);
      const Matrix gram = e.transpose() * b.evaluate(y, 0).g * e;
      CHECK(max_abs(Matrix(gram - Matrix::Identity(n, n))) < 1e-10);
      for (int i = 0; i <= n; ++i) {
        const double v = lapse(i, y);
        const double div = killing_divergence(i, y);
        CHECK(std::abs(div - n * v) <= 1e-10 * std::max(1.0, std::abs(n * v)));
        CHECK(conformal_killing_residual(i, y) < 1e-10);
      }
    }
  }
}

TEST_CASE("Killing field Jacobians match finite differences") {
  std::mt19937_64 rng(19);
  for (int n : {3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Point y = random_point(rng, n, 0.5, 4.0);
      for (int i = 0; i <= n; ++i) {
        const FdResult fd = fd_oracle([i](const Point& z) { return killing_field(i, z); }, y, 1, 1e-3);
        const Matrix jac = killing_field_jacobian(i, y);
        for (int m = 0; m < n; ++m)
          CHECK(max_abs(Vector(fd.first[static_cast<std::size_t>(m)] - jac.col(m))) <
                1e-8 * std::max(1.0, max_abs(jac)));
      }
    }
  }
}

TEST_CASE("lapse functions and the radial Killing field") {
  Point y(3);
  y << 0.0, 0.0, 2.0;
  CHECK(lapse(0, y) == doctest::Approx(std::cosh(2.0)));
  CHECK(lapse(3, y) == doctest::Approx(std::sinh(2.0)));
  CHECK(lapse(1, y) == doctest::Approx(0.0));
  CHECK(killing_field(0, y)[2] == doctest::Approx(std::sinh(2.0)));
  CHECK_THROWS_AS(lapse(4, y), UsageError);
}

TEST_CASE("hyperbolic profiles are smooth near the chart boundary") {
  const Profile b = hyperbolic_b_profile(0.05);
  CHECK(b.v == doctest::Approx(std::pow(std::sinh(0.05) / 0.05, 2)));
  CHECK(b.d1 > 0.0);
  const HyperbolicMetric h(3);
  CHECK(h.hyperbolic_deviation(Point::Constant(3, 1.0), 2).has_value());
}
