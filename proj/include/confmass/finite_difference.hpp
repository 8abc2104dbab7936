#pragma once

// Fourth-order central finite differences: the fallback derivative provider
// for fields without closed-form derivatives, and the cross-check for those
// that have them.

#include <functional>

#include "confmass/geometry.hpp"

namespace confmass {

using VectorFunction = std::function<Vector(const Point&)>;

struct FdResult {
  std::vector<Vector> first;   // first[k] = d_k f
  std::vector<Vector> second;  // second[l * n + k] = d_l d_k f, symmetric in (l, k)
};

/// h = 1e-3 * max(1, |x|) on cartesian ends, 1e-3 on the hyperbolic chart.
double default_step(const Chart& chart, const Point& x);

/// Five-point stencils along each axis; mixed partials use the 4x4 tensor
/// product of the first-derivative stencil. When `domain` is given, throws
/// StencilError if any stencil point would fall inside the excised region.
FdResult fd_oracle(const VectorFunction& f, const Point& x, int order, double h,
                   const Chart* domain = nullptr);

ScalarSample fd_scalar(const std::function<double(const Point&)>& f, const Point& x, int order,
                       double h, const Chart* domain = nullptr);

MetricSample fd_metric(const std::function<Matrix(const Point&)>& g, const Point& x, int order,
                       double h, const Chart* domain = nullptr);

/// Metric known only through its components; derivatives by finite differences.
class FiniteDifferenceMetric final : public MetricField {
 public:
  FiniteDifferenceMetric(Chart chart, std::function<Matrix(const Point&)> components);
  const Chart& chart() const override { return chart_; }
  MetricSample evaluate(const Point& x, int order) const override;
  Provenance provenance() const override { return Provenance::finite_difference; }

 private:
  Chart chart_;
  std::function<Matrix(const Point&)> components_;
};

class FiniteDifferenceScalar final : public ScalarField {
 public:
  FiniteDifferenceScalar(Chart chart, std::function<double(const Point&)> value);
  int dimension() const override { return chart_.dimension; }
  ScalarSample evaluate(const Point& x, int order) const override;
  Provenance provenance() const override { return Provenance::finite_difference; }

 private:
  Chart chart_;
  std::function<double(const Point&)> value_;
};

}  // namespace confmass
