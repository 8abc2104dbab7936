#pragma once

// Energy and momentum densities of an initial data set (g, K):
//   2 mu = S - |K|_g^2 + (tr_g K)^2,   J^i = nabla_j (K^ij - (tr_g K) g^ij).

#include "confmass/curvature.hpp"

namespace confmass {

struct ConstraintPair {
  double mu = 0.0;
  VectorAtPoint J;
  // Magnitudes of the ingredients; a computed mu or J far below these is
  // rounding noise rather than signal.
  double mu_scale = 0.0;
  double J_scale = 0.0;
};

/// K covariant with first derivatives; g, Gamma and curvature at the same point.
ConstraintPair constraints_at(const MetricAtPoint& m, const Christoffel& gam, const CurvaturePoint& curv,
                              const TensorSample& k);

ConstraintPair compute_mu_J(const MetricField& g, const SymTensorField& k, const Point& x);

/// nabla_j K_ab = d_j K_ab - Gamma^c_ja K_cb - Gamma^c_jb K_ac, indexed [j](a, b).
std::vector<Matrix> covariant_derivative_sym2(const Christoffel& gam, const TensorSample& k);

}  // namespace confmass
