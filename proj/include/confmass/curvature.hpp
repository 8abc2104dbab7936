#pragma once

// Christoffel symbols, Ricci and scalar curvature, Hessian and Laplacian,
// divergence of symmetric 2-tensors and mean curvature of coordinate spheres.

#include "confmass/geometry.hpp"

namespace confmass {

/// gamma[k](i, j) = Gamma^k_ij.
struct Christoffel {
  std::vector<Matrix> gamma;

  int dimension() const { return static_cast<int>(gamma.size()); }
  double operator()(int k, int i, int j) const { return gamma[static_cast<std::size_t>(k)](i, j); }
};

/// dgamma[m].gamma[k](i, j) = d_m Gamma^k_ij.
using ChristoffelDerivative = std::vector<Christoffel>;

struct CurvaturePoint {
  SymTensor2 ricci;
  double scalar = 0.0;
};

Christoffel christoffel(const MetricSample& s, const MetricAtPoint& m);
Christoffel christoffel(const MetricField& g, const Point& x);

/// From analytic second derivatives; needs s evaluated at order 2.
ChristoffelDerivative christoffel_derivative(const MetricSample& s, const MetricAtPoint& m, const Christoffel& gam);

/// Ric_ij = d_k G^k_ij - d_i G^k_kj + G^k_kl G^l_ij - G^k_il G^l_kj.
Matrix ricci_from(const Christoffel& gam, const ChristoffelDerivative& dgam);

CurvaturePoint curvature_point(const MetricField& g, const Point& x);

struct HessianLaplacian {
  SymTensor2 hessian;
  double laplacian = 0.0;
};

HessianLaplacian hessian_laplacian(const Christoffel& gam, const MetricAtPoint& m, const ScalarSample& f);
HessianLaplacian hessian_laplacian(const MetricField& g, const ScalarField& f, const Point& x);

/// d_j T^ij + Gamma^i_jk T^kj + Gamma^j_jk T^ik for contravariant T.
Vector divergence_sym2(const Christoffel& gam, const Matrix& t, const std::vector<Matrix>& dt);
VectorAtPoint divergence_sym2(const MetricField& g, const SymTensorField& t, const Point& x);

enum class Orientation { outward, inward };

/// Level set {|x| = value}: a coordinate sphere r = const on an asymptotically
/// flat end, a geodesic sphere rho = const on the hyperbolic chart.
struct LevelSurface {
  double value = 1.0;
};

/// g-unit normal of the level set through x, covariant gradient direction
/// raised with g, in the requested orientation.
Vector unit_normal(const MetricAtPoint& m, const Point& x, Orientation orientation);

double mean_curvature(const MetricSample& s, const MetricAtPoint& m, const Christoffel& gam, const Point& x,
                      Orientation orientation);
double mean_curvature(const MetricField& g, const LevelSurface& surface, const Point& x, Orientation orientation);

/// G = Ric - 1/2 [S + (n-1)(n-2)] g.
Matrix g_tensor(const CurvaturePoint& c, const Matrix& g);
SymTensor2 g_tensor(const MetricField& g, const Point& x);

}  // namespace confmass
