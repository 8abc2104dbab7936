#include "confmass/sampling.hpp"

#include <cmath>
#include <random>

namespace confmass {

std::vector<Point> random_shell_points(int n, std::size_t count, std::uint64_t seed, double rmin, double rmax) {
  if (n < 1 || !(rmin > 0.0) || !(rmax >= rmin)) throw UsageError("sample needs n >= 1 and 0 < min <= max");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Point x(n);
    for (int i = 0; i < n; i += 2) {
      // Box-Muller pair
      const double radius = std::sqrt(-2.0 * std::log(uniform()));
      const double angle = 2.0 * M_PI * uniform();
      x[i] = radius * std::cos(angle);
      if (i + 1 < n) x[i + 1] = radius * std::sin(angle);
    }
    out.push_back((rmin + (rmax - rmin) * uniform()) * x / x.norm());
  }
  return out;
}

}  // namespace confmass
