#include "confmass/kernels.hpp"

#include <exception>
#include <mutex>
#include <vector>

#include "confmass/quadrature.hpp"

namespace confmass {

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Execution execution) {
  if (execution == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex guard;
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

Vector integrate_nodes(std::size_t count, int components, const NodeIntegrand& integrand, Summation summation,
                       Execution execution) {
  if (components <= 0) throw UsageError("integrate_nodes needs at least one component");
  const auto m = static_cast<std::size_t>(components);
  std::vector<double> buffer(count * m, 0.0);
  for_each_index(count, [&](std::size_t q) { integrand(q, buffer.data() + q * m); }, execution);

  Vector out(components);
  std::vector<double> column(count);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t q = 0; q < count; ++q) column[q] = buffer[q * m + c];
    out[static_cast<Eigen::Index>(c)] =
        summation == Summation::pairwise ? pairwise_sum(column) : compensated_sum(column);
  }
  return out;
}

}  // namespace confmass
