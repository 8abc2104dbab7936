#include "confmass/data.hpp"

#include <algorithm>
#include <sstream>

namespace confmass {

InitialData::InitialData(MetricFieldPtr metric, SymTensorFieldPtr k, double decay_tau, double decay_eps)
    : g(std::move(metric)), K(std::move(k)), tau(decay_tau), eps(decay_eps) {
  if (!g) throw UsageError("initial data needs a metric");
  if (g->chart().kind != ChartKind::cartesian_end) throw UsageError("initial data live on a cartesian end");
  const int n = g->dimension();
  if (!K) K = std::make_shared<ZeroTensor>(n);
  if (K->dimension() != n) throw UsageError("extrinsic curvature dimension differs from the metric");
  if (K->index() != IndexType::covariant) throw UsageError("extrinsic curvature must be covariant");
  if (!(tau > std::max(0.5, n - 3.0))) {
    std::ostringstream os;
    os << "decay rate tau = " << tau << " must exceed max(1/2, n-3) = " << std::max(0.5, n - 3.0);
    throw UsageError(os.str());
  }
  if (!(eps > 0.0)) throw UsageError("decay rate epsilon must be positive");
}

AHMetric::AHMetric(MetricFieldPtr metric, double decay_tau) : g(std::move(metric)), tau(decay_tau) {
  if (!g) throw UsageError("AH metric needs a metric field");
  if (g->chart().kind != ChartKind::polar_hyperbolic) throw UsageError("AH metrics live on the hyperbolic chart");
  if (!(tau > 0.0)) throw UsageError("AH decay rate must be positive");
}

}  // namespace confmass
