#include "confmass/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace confmass {

std::vector<Matrix> covariant_derivative_sym2(const Christoffel& gam, const TensorSample& k) {
  const int n = gam.dimension();
  if (k.dt.size() != static_cast<std::size_t>(n)) throw UsageError("extrinsic curvature needs first derivatives");
  std::vector<Matrix> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // Gamma^c_ja K_cb as a matrix in (a, b): (Gamma_j)^T K with (Gamma_j)(c, a) = Gamma^c_ja
    Matrix gj(n, n);
    for (int c = 0; c < n; ++c) gj.row(c) = gam.gamma[static_cast<std::size_t>(c)].row(j);
    const Matrix t = gj.transpose() * k.t;
    out[static_cast<std::size_t>(j)] = k.dt[static_cast<std::size_t>(j)] - t - t.transpose();
  }
  return out;
}

ConstraintPair constraints_at(const MetricAtPoint& m, const Christoffel& gam, const CurvaturePoint& curv,
                              const TensorSample& k) {
  const int n = m.dimension();
  const Matrix& gi = m.inverse();
  const Matrix kup = gi * k.t * gi;
  const double k2 = (kup.cwiseProduct(k.t)).sum();
  const double tr = (gi.cwiseProduct(k.t)).sum();

  ConstraintPair out;
  out.mu = 0.5 * (curv.scalar - k2 + tr * tr);
  out.mu_scale = std::max({std::sqrt(((gi * curv.ricci.c * gi).cwiseProduct(curv.ricci.c)).sum()), k2, tr * tr});

  const std::vector<Matrix> dk = covariant_derivative_sym2(gam, k);
  // g^jb nabla_j K_ab, and d_j tr K = g^ab nabla_j K_ab
  Vector div_low = Vector::Zero(n);
  Vector dtr = Vector::Zero(n);
  double dk2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const Matrix& d = dk[static_cast<std::size_t>(j)];
    div_low += d * gi.col(j);
    dtr[j] = (gi.cwiseProduct(d)).sum();
    dk2 += max_abs(d) * max_abs(d);
  }
  out.J = {gi * (div_low - dtr), IndexType::contravariant};
  out.J_scale = std::sqrt(dk2) * std::max(1.0, max_abs(gi));
  return out;
}

ConstraintPair compute_mu_J(const MetricField& g, const SymTensorField& k, const Point& x) {
  if (k.index() != IndexType::covariant) throw UsageError("extrinsic curvature must be covariant");
  const MetricSample s = g.evaluate(x, 1);
  const MetricAtPoint m(s.g);
  return constraints_at(m, christoffel(s, m), curvature_point(g, x), k.evaluate(x, 1));
}

}  // namespace confmass
