#pragma once

// Containers pairing fields with the decay metadata the validators check.

#include <string>

#include "confmass/geometry.hpp"

namespace confmass {

/// (g, K) on an asymptotically flat end with decay rates tau and epsilon.
struct InitialData {
  MetricFieldPtr g;
  SymTensorFieldPtr K;
  double tau = 1.0;
  double eps = 1.0;

  InitialData() = default;
  /// Throws UsageError unless tau > max(1/2, n-3), eps > 0 and the chart is
  /// a cartesian end. A null K is replaced by zero.
  InitialData(MetricFieldPtr metric, SymTensorFieldPtr k, double decay_tau, double decay_eps);
  int dimension() const { return g->dimension(); }
};

/// Metric on the polar-hyperbolic chart with its decay rate. Rates
/// tau <= n/2 are accepted here so that negative controls can be built;
/// validate_ah reports them.
struct AHMetric {
  MetricFieldPtr g;
  double tau = 0.0;

  AHMetric() = default;
  AHMetric(MetricFieldPtr metric, double decay_tau);
  int dimension() const { return g->dimension(); }
};

}  // namespace confmass
