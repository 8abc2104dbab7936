#include <cmath>

#include "confmass/finite_difference.hpp"
#include "confmass/geometry.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace confmass;
using testing_support::random_point;
using testing_support::random_rotation;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("tensor_algebra trace and norms") {
  const MetricAtPoint flat(Matrix::Identity(3, 3));
  const auto tr = tensor_algebra(flat, SymTensor2{Matrix::Identity(3, 3), IndexType::covariant}, TensorAction::trace);
  CHECK(std::get<double>(tr) == doctest::Approx(3.0));

  const auto nv = tensor_algebra(flat, VectorAtPoint{vec3(3, 4, 0), IndexType::covariant}, TensorAction::norm);
  CHECK(std::get<double>(nv) == doctest::Approx(5.0));

  const MetricAtPoint four(4.0 * Matrix::Identity(3, 3));
  const auto nt = tensor_algebra(four, SymTensor2{Matrix::Identity(3, 3), IndexType::covariant}, TensorAction::norm);
  CHECK(std::get<double>(nt) == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("tensor_algebra rejects incompatible index types and bad metrics") {
  const MetricAtPoint flat(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(tensor_algebra(flat, SymTensor2{Matrix::Identity(3, 3), IndexType::mixed}, TensorAction::raise),
                  UsageError);
  CHECK_THROWS_AS(tensor_algebra(flat, VectorAtPoint{vec3(1, 0, 0), IndexType::covariant}, TensorAction::trace),
                  UsageError);
  Matrix bad = Matrix::Identity(3, 3);
  bad(2, 2) = -1.0;
  CHECK_THROWS_AS(MetricAtPoint{bad}, DegenerateMetricError);
}

TEST_CASE("raise then lower is the identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a = Matrix::Random(4, 4);
    const MetricAtPoint m(a * a.transpose() + 4.0 * Matrix::Identity(4, 4));
    const Vector v = Vector::Random(4);
    const VectorAtPoint back = lower(m, raise(m, VectorAtPoint{v, IndexType::covariant}));
    CHECK(testing_support::rel_err(back.c, v) < 1e-12);
    Matrix t = Matrix::Random(4, 4);
    t = (t + t.transpose()).eval();
    const SymTensor2 tb = lower(m, raise(m, SymTensor2{t, IndexType::covariant}));
    CHECK(testing_support::rel_err(tb.c, t) < 1e-12);
  }
}

TEST_CASE("norm is invariant under orthogonal changes of coordinates") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix q = random_rotation(rng, 3);
    const Vector v = Vector::Random(3);
    // flat and conformally flat (scalar multiple of the identity) metrics
    for (double c : {1.0, std::exp(0.7)}) {
      const Matrix g = c * Matrix::Identity(3, 3);
      const double before = norm(MetricAtPoint(g), VectorAtPoint{v, IndexType::covariant});
      const double after =
          norm(MetricAtPoint(q * g * q.transpose()), VectorAtPoint{Vector(q * v), IndexType::covariant});
      CHECK(std::abs(before - after) <= 1e-12 * before);
    }
  }
}

TEST_CASE("fd_oracle on polynomials and the exponential") {
  const Point x = vec3(0.3, -0.2, 0.5);
  const FdResult lin = fd_oracle([](const Point& y) { return Vector::Constant(1, y[0]); }, x, 1, 1e-3);
  CHECK(std::abs(lin.first[0][0] - 1.0) < 1e-12);
  CHECK(std::abs(lin.first[1][0]) < 1e-12);
  CHECK(std::abs(lin.first[2][0]) < 1e-12);

  const ScalarSample q = fd_scalar([](const Point& y) { return y[0] * y[0]; }, x, 2, 1e-3);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 2.0;
  CHECK(confmass::max_abs(Matrix(q.hess - expected)) < 1e-10);
  CHECK(q.hess.isApprox(q.hess.transpose(), 0.0));

  const FdResult e = fd_oracle([](const Point& y) { return Vector::Constant(1, std::exp(y[0])); },
                               Point::Zero(3), 1, 1e-2);
  CHECK(std::abs(e.first[0][0] - 1.0) < 1e-8);
}

TEST_CASE("fd_oracle refuses stencils that leave the chart") {
  const Chart chart(3, ChartKind::cartesian_end, 1.0);
  const Point x = vec3(1.001, 0, 0);
  auto f = [](const Point& y) { return Vector::Constant(1, y.norm()); };
  CHECK_THROWS_AS(fd_oracle(f, x, 1, 1e-3, &chart), StencilError);
  CHECK_THROWS_AS(fd_oracle(f, x, 1, -1.0), UsageError);
  CHECK_NOTHROW(fd_oracle(f, vec3(1.01, 0, 0), 2, 1e-3, &chart));
}

TEST_CASE("chart domain checks") {
  CHECK_THROWS_AS(Chart(2, ChartKind::cartesian_end, 1.0), UsageError);
  const Chart chart(3, ChartKind::polar_hyperbolic, 0.5);
  CHECK(chart.contains(vec3(0.6, 0, 0)));
  CHECK_FALSE(chart.contains(vec3(0.4, 0, 0)));
  CHECK_THROWS_AS(chart.require(vec3(0.4, 0, 0)), DomainError);
  CHECK_THROWS_AS(chart.require(Point::Constant(4, 1.0)), DomainError);
}
