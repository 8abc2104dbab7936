#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "confmass/geometry.hpp"

namespace testing_support {

using confmass::Matrix;
using confmass::Point;

/// Uniform point in the shell rmin <= |x| <= rmax, deterministic per seed.
inline Point random_point(std::mt19937_64& rng, int n, double rmin, double rmax) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(rmin, rmax);
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = normal(rng);
  return uni(rng) * x / x.norm();
}

inline Matrix random_rotation(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

/// |a - b|_inf / max(|a|_inf, |b|_inf, scale)
inline double rel_err(const Matrix& a, const Matrix& b, double scale = 1.0) {
  const double den = std::max({confmass::max_abs(a), confmass::max_abs(b), scale});
  return confmass::max_abs(Matrix(a - b)) / den;
}

inline double rel_err(double a, double b, double scale = 1.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

}  // namespace testing_support
