#include "confmass/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace confmass {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw UsageError("Gauss-Legendre rule needs at least one node");
  Rule1D r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pm = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.x[lo] = -x;
    r.x[hi] = x;
    r.w[lo] = w;
    r.w[hi] = w;
  }
  if (n % 2 == 1) r.x[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

void append_s2(SphereRule& rule, int order, double radius, double w_scale, int n, double last) {
  const Rule1D gl = gauss_legendre(order);
  const int nphi = 2 * order;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  for (int a = 0; a < order; ++a) {
    const double ct = gl.x[static_cast<std::size_t>(a)];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int b = 0; b < nphi; ++b) {
      const double phi = (b + 0.5) * dphi;
      Vector th(n);
      th[0] = radius * st * std::cos(phi);
      th[1] = radius * st * std::sin(phi);
      th[2] = radius * ct;
      if (n == 4) th[3] = last;
      rule.nodes.push_back(th);
      rule.weights.push_back(w_scale * gl.w[static_cast<std::size_t>(a)] * dphi);
    }
  }
}

}  // namespace

SphereRule sphere_rule(int n, int order) {
  if (n != 3 && n != 4) throw UsageError("sphere rules exist for n = 3 and n = 4 only");
  if (order < 2) throw UsageError("sphere rule order must be at least 2");
  SphereRule rule;
  rule.dimension = n;
  rule.order = order;
  if (n == 3) {
    append_s2(rule, order, 1.0, 1.0, 3, 0.0);
    return rule;
  }
  const Rule1D gl = gauss_legendre(order);
  for (int c = 0; c < order; ++c) {
    const double chi = 0.5 * std::numbers::pi * (gl.x[static_cast<std::size_t>(c)] + 1.0);
    const double sc = std::sin(chi);
    append_s2(rule, order, sc, 0.5 * std::numbers::pi * gl.w[static_cast<std::size_t>(c)] * sc * sc, 4,
              std::cos(chi));
  }
  return rule;
}

double pairwise_sum(const double* v, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double compensated_sum(const double* v, std::size_t count) {
  double s = 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = s + v[i];
    if (std::abs(s) >= std::abs(v[i])) {
      c += (s - t) + v[i];
    } else {
      c += (v[i] - t) + s;
    }
    s = t;
  }
  return s + c;
}

double compensated_sum(const std::vector<double>& v) { return compensated_sum(v.data(), v.size()); }

}  // namespace confmass
