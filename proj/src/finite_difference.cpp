#include "confmass/finite_difference.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace confmass {

namespace {

constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
constexpr std::array<double, 4> kFirst{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

void check_stencil(const Chart* domain, const Point& x, int order, double h) {
  if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
  if (domain == nullptr) return;
  const double reach = (order >= 2 && x.size() > 1) ? 2.0 * std::sqrt(2.0) * h : 2.0 * h;
  if (x.norm() - reach < domain->radial_min) {
    std::ostringstream os;
    os << "stencil of reach " << reach << " at radius " << x.norm() << " crosses the domain boundary "
       << domain->radial_min;
    throw StencilError(os.str());
  }
}

}  // namespace

double default_step(const Chart& chart, const Point& x) {
  if (chart.kind == ChartKind::polar_hyperbolic) return 1e-3;
  return 1e-3 * std::max(1.0, x.norm());
}

FdResult fd_oracle(const VectorFunction& f, const Point& x, int order, double h, const Chart* domain) {
  if (order < 1 || order > 2) throw UsageError("fd_oracle order must be 1 or 2");
  check_stencil(domain, x, order, h);
  const int n = static_cast<int>(x.size());
  FdResult out;
  out.first.resize(static_cast<std::size_t>(n));

  Vector center;
  if (order >= 2) {
    center = f(x);
    out.second.resize(static_cast<std::size_t>(n * n));
  }

  for (int k = 0; k < n; ++k) {
    std::array<Vector, 4> vals;
    for (std::size_t s = 0; s < kOffsets.size(); ++s) {
      Point y = x;
      y[k] += kOffsets[s] * h;
      vals[s] = f(y);
    }
    Vector d = kFirst[0] * vals[0];
    for (std::size_t s = 1; s < 4; ++s) d += kFirst[s] * vals[s];
    out.first[static_cast<std::size_t>(k)] = d / h;

    if (order >= 2) {
      // -f(-2) + 16 f(-1) - 30 f(0) + 16 f(1) - f(2), over 12 h^2
      Vector dd = (-vals[0] + 16.0 * vals[1] - 30.0 * center + 16.0 * vals[2] - vals[3]) / (12.0 * h * h);
      out.second[static_cast<std::size_t>(k * n + k)] = dd;
    }
  }

  if (order >= 2) {
    for (int l = 0; l < n; ++l) {
      for (int k = l + 1; k < n; ++k) {
        Vector acc;
        for (std::size_t a = 0; a < 4; ++a) {
          for (std::size_t b = 0; b < 4; ++b) {
            Point y = x;
            y[l] += kOffsets[a] * h;
            y[k] += kOffsets[b] * h;
            Vector term = (kFirst[a] * kFirst[b]) * f(y);
            if (acc.size() == 0) {
              acc = term;
            } else {
              acc += term;
            }
          }
        }
        acc /= h * h;
        out.second[static_cast<std::size_t>(l * n + k)] = acc;
        out.second[static_cast<std::size_t>(k * n + l)] = acc;
      }
    }
  }
  return out;
}

ScalarSample fd_scalar(const std::function<double(const Point&)>& f, const Point& x, int order, double h,
                       const Chart* domain) {
  ScalarSample s;
  s.value = f(x);
  if (order == 0) return s;
  const int n = static_cast<int>(x.size());
  FdResult r = fd_oracle([&](const Point& y) { return Vector::Constant(1, f(y)); }, x, order, h, domain);
  s.grad.resize(n);
  for (int k = 0; k < n; ++k) s.grad[k] = r.first[static_cast<std::size_t>(k)][0];
  if (order >= 2) {
    s.hess.resize(n, n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) s.hess(l, k) = r.second[static_cast<std::size_t>(l * n + k)][0];
  }
  return s;
}

MetricSample fd_metric(const std::function<Matrix(const Point&)>& g, const Point& x, int order, double h,
                       const Chart* domain) {
  MetricSample s;
  s.g = g(x);
  if (order == 0) return s;
  const int n = static_cast<int>(x.size());
  auto flat = [&](const Point& y) -> Vector {
    Matrix m = g(y);
    return Eigen::Map<const Vector>(m.data(), m.size());
  };
  FdResult r = fd_oracle(flat, x, order, h, domain);
  auto unflat = [n](const Vector& v) {
    Matrix m = Eigen::Map<const Matrix>(v.data(), n, n);
    return Matrix(0.5 * (m + m.transpose()));
  };
  for (const Vector& v : r.first) s.dg.push_back(unflat(v));
  if (order >= 2)
    for (const Vector& v : r.second) s.ddg.push_back(unflat(v));
  return s;
}

FiniteDifferenceMetric::FiniteDifferenceMetric(Chart chart, std::function<Matrix(const Point&)> components)
    : chart_(chart), components_(std::move(components)) {}

MetricSample FiniteDifferenceMetric::evaluate(const Point& x, int order) const {
  chart_.require(x);
  return fd_metric(components_, x, order, default_step(chart_, x), &chart_);
}

FiniteDifferenceScalar::FiniteDifferenceScalar(Chart chart, std::function<double(const Point&)> value)
    : chart_(chart), value_(std::move(value)) {}

ScalarSample FiniteDifferenceScalar::evaluate(const Point& x, int order) const {
  chart_.require(x);
  return fd_scalar(value_, x, order, default_step(chart_, x), &chart_);
}

}  // namespace confmass
