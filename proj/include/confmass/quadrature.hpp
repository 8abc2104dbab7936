#pragma once

// Gauss-Legendre rules, product rules on the unit sphere S^{n-1} (n = 3, 4),
// and order-fixed summation.

#include <vector>

#include "confmass/geometry.hpp"

namespace confmass {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
Rule1D gauss_legendre(int n);

/// Area of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Nodes theta_q on the unit sphere S^{n-1} and weights summing to its area.
/// n = 3: Gauss-Legendre in cos(theta) (order nodes) times 2*order uniform
/// nodes in phi. n = 4: Gauss-Legendre in chi on [0, pi] with weight
/// sin^2(chi), then the n = 3 rule on each chi-slice.
struct SphereRule {
  int dimension = 3;
  int order = 24;
  std::vector<Vector> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

SphereRule sphere_rule(int n, int order);

/// Pairwise (tree) sum in index order.
double pairwise_sum(const double* v, std::size_t count);
double pairwise_sum(const std::vector<double>& v);

/// Neumaier-compensated sum in index order.
double compensated_sum(const double* v, std::size_t count);
double compensated_sum(const std::vector<double>& v);

}  // namespace confmass
