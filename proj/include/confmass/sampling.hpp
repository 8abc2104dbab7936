#pragma once

// Reproducible random sample points. The transforms from raw 64-bit draws
// are written out here so the sample does not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <vector>

#include "confmass/geometry.hpp"

namespace confmass {

/// count points with |x| uniform in [rmin, rmax] and direction uniform on the sphere.
std::vector<Point> random_shell_points(int n, std::size_t count, std::uint64_t seed, double rmin, double rmax);

}  // namespace confmass
