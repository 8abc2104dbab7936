#include "confmass/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confmass/finite_difference.hpp"

namespace confmass {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
std::vector<Matrix> lowered(const MetricSample& s) {
  const int n = s.dimension();
  std::vector<Matrix> low(at(n), Matrix::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = 0.5 * (s.dg[at(i)](j, l) + s.dg[at(j)](i, l) - s.dg[at(l)](i, j));
        low[at(l)](i, j) = v;
        low[at(l)](j, i) = v;
      }
  return low;
}

}  // namespace

Christoffel christoffel(const MetricSample& s, const MetricAtPoint& m) {
  const int n = s.dimension();
  if (s.dg.size() != at(n)) throw UsageError("christoffel needs first metric derivatives");
  const std::vector<Matrix> low = lowered(s);
  Christoffel out;
  out.gamma.assign(at(n), Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.gamma[at(k)] += m.inverse()(k, l) * low[at(l)];
  return out;
}

Christoffel christoffel(const MetricField& g, const Point& x) {
  const MetricSample s = g.evaluate(x, 1);
  return christoffel(s, MetricAtPoint(s.g));
}

ChristoffelDerivative christoffel_derivative(const MetricSample& s, const MetricAtPoint& m, const Christoffel& gam) {
  const int n = s.dimension();
  if (s.ddg.size() != at(n * n)) throw UsageError("christoffel_derivative needs second metric derivatives");
  ChristoffelDerivative out(at(n));
  for (int q = 0; q < n; ++q) {
    // d_q Gamma_{l,ij} - d_q g_la Gamma^a_ij, then raise l
    std::vector<Matrix> w(at(n), Matrix::Zero(n, n));
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          double v = 0.5 * (s.d2(q, i)(j, l) + s.d2(q, j)(i, l) - s.d2(q, l)(i, j));
          for (int a = 0; a < n; ++a) v -= s.dg[at(q)](l, a) * gam(a, i, j);
          w[at(l)](i, j) = v;
          w[at(l)](j, i) = v;
        }
      }
    }
    Christoffel& d = out[at(q)];
    d.gamma.assign(at(n), Matrix::Zero(n, n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) d.gamma[at(k)] += m.inverse()(k, l) * w[at(l)];
  }
  return out;
}

Matrix ricci_from(const Christoffel& gam, const ChristoffelDerivative& dgam) {
  const int n = gam.dimension();
  Vector contracted = Vector::Zero(n);  // Gamma^k_kl
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) contracted[l] += gam(k, k, l);
  Matrix ric = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) {
        v += dgam[at(k)](k, i, j) - dgam[at(i)](k, k, j);
        v += contracted[k] * gam(k, i, j);
        for (int l = 0; l < n; ++l) v -= gam(k, i, l) * gam(l, k, j);
      }
      ric(i, j) = v;
      ric(j, i) = v;
    }
  }
  return ric;
}

CurvaturePoint curvature_point(const MetricField& g, const Point& x) {
  const int n = g.dimension();
  ChristoffelDerivative dgam;
  Christoffel gam;
  std::optional<MetricAtPoint> m;
  if (g.provenance() == Provenance::analytic) {
    const MetricSample s = g.evaluate(x, 2);
    m.emplace(s.g);
    gam = christoffel(s, *m);
    dgam = christoffel_derivative(s, *m, gam);
  } else {
    const MetricSample s = g.evaluate(x, 1);
    m.emplace(s.g);
    gam = christoffel(s, *m);
    auto flat = [&g, n](const Point& y) -> Vector {
      const Christoffel c = christoffel(g, y);
      Vector v(n * n * n);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) v[(k * n + j) * n + i] = c(k, i, j);
      return v;
    };
    const FdResult fd = fd_oracle(flat, x, 1, default_step(g.chart(), x), &g.chart());
    dgam.resize(at(n));
    for (int q = 0; q < n; ++q) {
      dgam[at(q)].gamma.assign(at(n), Matrix::Zero(n, n));
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) dgam[at(q)].gamma[at(k)](i, j) = fd.first[at(q)][(k * n + j) * n + i];
      for (Matrix& mk : dgam[at(q)].gamma) mk = 0.5 * (mk + mk.transpose()).eval();
    }
  }
  CurvaturePoint out;
  out.ricci.c = ricci_from(gam, dgam);
  out.ricci.index = IndexType::covariant;
  out.scalar = (m->inverse().cwiseProduct(out.ricci.c)).sum();
  return out;
}

HessianLaplacian hessian_laplacian(const Christoffel& gam, const MetricAtPoint& m, const ScalarSample& f) {
  const int n = gam.dimension();
  if (f.grad.size() != n || f.hess.rows() != n) throw UsageError("hessian_laplacian needs the Hessian oracle");
  Matrix h = f.hess;
  for (int k = 0; k < n; ++k) h -= f.grad[k] * gam.gamma[at(k)];
  h = 0.5 * (h + h.transpose()).eval();
  HessianLaplacian out;
  out.hessian = {h, IndexType::covariant};
  out.laplacian = (m.inverse().cwiseProduct(h)).sum();
  return out;
}

HessianLaplacian hessian_laplacian(const MetricField& g, const ScalarField& f, const Point& x) {
  const MetricSample s = g.evaluate(x, 1);
  const MetricAtPoint m(s.g);
  return hessian_laplacian(christoffel(s, m), m, f.evaluate(x, 2));
}

Vector divergence_sym2(const Christoffel& gam, const Matrix& t, const std::vector<Matrix>& dt) {
  const int n = gam.dimension();
  if (dt.size() != at(n)) throw UsageError("divergence_sym2 needs first derivatives of T");
  Vector div = Vector::Zero(n);
  Vector contracted = Vector::Zero(n);  // Gamma^j_jk
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) contracted[k] += gam(j, j, k);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += dt[at(j)](i, j);
    v += (gam.gamma[at(i)].cwiseProduct(t)).sum();
    v += t.row(i).dot(contracted);
    div[i] = v;
  }
  return div;
}

VectorAtPoint divergence_sym2(const MetricField& g, const SymTensorField& t, const Point& x) {
  if (t.index() != IndexType::contravariant) throw UsageError("divergence_sym2 expects a contravariant tensor");
  const MetricSample s = g.evaluate(x, 1);
  const MetricAtPoint m(s.g);
  const TensorSample ts = t.evaluate(x, 1);
  return {divergence_sym2(christoffel(s, m), ts.t, ts.dt), IndexType::contravariant};
}

Vector unit_normal(const MetricAtPoint& m, const Point& x, Orientation orientation) {
  const Vector th = x / x.norm();
  const Vector up = m.inverse() * th;
  const double len = std::sqrt(th.dot(up));
  const double sign = orientation == Orientation::outward ? 1.0 : -1.0;
  return sign * up / len;
}

double mean_curvature(const MetricSample& s, const MetricAtPoint& m, const Christoffel& gam, const Point& x,
                      Orientation orientation) {
  const int n = s.dimension();
  const double r = x.norm();
  const Vector th = x / r;
  // psi = |x|: grad theta, Hessian (delta - theta theta) / r
  ScalarSample psi;
  psi.value = r;
  psi.grad = th;
  psi.hess = (Matrix::Identity(n, n) - th * th.transpose()) / r;
  const HessianLaplacian hl = hessian_laplacian(gam, m, psi);
  const Vector up = m.inverse() * th;
  const double len2 = th.dot(up);
  if (!(len2 > 0.0) || !std::isfinite(len2)) throw DegenerateMetricError("degenerate induced metric on level set");
  const double len = std::sqrt(len2);
  const Vector nu = up / len;
  const double h = (hl.laplacian - nu.dot(hl.hessian.c * nu)) / len;
  return orientation == Orientation::outward ? h : -h;
}

double mean_curvature(const MetricField& g, const LevelSurface& surface, const Point& x, Orientation orientation) {
  const double r = x.norm();
  if (std::abs(r - surface.value) > 1e-9 * std::max(1.0, surface.value)) {
    std::ostringstream os;
    os << "point at radius " << r << " is not on the level set " << surface.value;
    throw UsageError(os.str());
  }
  const MetricSample s = g.evaluate(x, 1);
  const MetricAtPoint m(s.g);
  return mean_curvature(s, m, christoffel(s, m), x, orientation);
}

Matrix g_tensor(const CurvaturePoint& c, const Matrix& g) {
  const double n = static_cast<double>(g.rows());
  return c.ricci.c - 0.5 * (c.scalar + (n - 1.0) * (n - 2.0)) * g;
}

SymTensor2 g_tensor(const MetricField& g, const Point& x) {
  const MetricSample s = g.evaluate(x, 0);
  return {g_tensor(curvature_point(g, x), s.g), IndexType::covariant};
}

}  // namespace confmass
