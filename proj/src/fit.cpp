#include "confmass/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "confmass/errors.hpp"

namespace confmass {

namespace {

constexpr double kMinPower = 0.5;
constexpr double kMinRate = 0.05;
constexpr double kMaxExponent = 12.0;

struct LinearModel {
  double limit = 0.0;
  double coefficient = 0.0;
  double sse = 0.0;
};

double basis(DecayModel model, double s, double p) {
  return model == DecayModel::power ? std::pow(s, -p) : std::exp(-p * s);
}

LinearModel solve_linear(const std::vector<double>& s, const std::vector<double>& v, DecayModel model, double p,
                         std::size_t first) {
  const auto m = static_cast<Eigen::Index>(s.size() - first);
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  // Normalize phi by its value at the first sample so the columns are O(1).
  const double ref = basis(model, s[first], p);
  for (Eigen::Index k = 0; k < m; ++k) {
    const std::size_t idx = first + static_cast<std::size_t>(k);
    a(k, 0) = 1.0;
    a(k, 1) = basis(model, s[idx], p) / ref;
    b[k] = v[idx];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  LinearModel out;
  out.limit = x[0];
  out.coefficient = x[1] / ref;
  out.sse = (a * x - b).squaredNorm();
  return out;
}

struct ExponentFit {
  double exponent = 0.0;
  LinearModel linear;
};

ExponentFit fit_exponent(const std::vector<double>& s, const std::vector<double>& v, DecayModel model,
                         double initial, std::size_t first) {
  const double lo = model == DecayModel::power ? kMinPower : kMinRate;
  const double hi = kMaxExponent;
  auto sse = [&](double p) { return solve_linear(s, v, model, p, first).sse; };

  // Data already constant to rounding: keep the initial exponent.
  double vmax = 0.0;
  for (std::size_t k = first; k < v.size(); ++k) vmax = std::max(vmax, std::abs(v[k]));
  const double p0 = std::clamp(initial, lo, hi);
  const LinearModel at_init = solve_linear(s, v, model, p0, first);
  if (at_init.sse <= 1e-30 * std::max(1.0, vmax * vmax)) return {p0, at_init};

  constexpr int kGrid = 120;
  double best_p = p0;
  double best = at_init.sse;
  for (int i = 0; i <= kGrid; ++i) {
    const double p = lo + (hi - lo) * i / kGrid;
    const double e = sse(p);
    if (e < best) {
      best = e;
      best_p = p;
    }
  }
  const double step = (hi - lo) / kGrid;
  double a = std::max(lo, best_p - step);
  double b = std::min(hi, best_p + step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = sse(c);
  double fd = sse(d);
  for (int it = 0; it < 80 && b - a > 1e-12 * std::max(1.0, b); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = sse(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = sse(d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double fr = sse(refined);
  if (fr < best) {
    best = fr;
    best_p = refined;
  }
  return {best_p, solve_linear(s, v, model, best_p, first)};
}

}  // namespace

LineFit fit_line(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size() || u.size() < 2) throw UsageError("fit_line needs at least two matched samples");
  const auto m = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    a(k, 0) = 1.0;
    a(k, 1) = u[static_cast<std::size_t>(k)];
    b[k] = v[static_cast<std::size_t>(k)];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  LineFit out;
  out.intercept = x[0];
  out.slope = x[1];
  out.residual = std::sqrt((a * x - b).squaredNorm() / static_cast<double>(m));
  return out;
}

LineFit fit_power_decay(const std::vector<double>& r, const std::vector<double>& values) {
  std::vector<double> u, v;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!(values[k] > 0.0)) throw UsageError("fit_power_decay needs positive values");
    u.push_back(std::log(r[k]));
    v.push_back(std::log(values[k]));
  }
  return fit_line(u, v);
}

LineFit fit_exponential_decay(const std::vector<double>& rho, const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values) {
    if (!(x > 0.0)) throw UsageError("fit_exponential_decay needs positive values");
    v.push_back(std::log(x));
  }
  return fit_line(rho, v);
}

Extrapolation extrapolate(const std::vector<double>& s, const std::vector<double>& values, DecayModel model,
                          double initial_exponent, double tol) {
  if (s.size() != values.size() || s.size() < 4) throw UsageError("extrapolation needs at least 4 samples");
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!(s[k] > s[k - 1])) throw UsageError("extrapolation samples must be strictly increasing");
  if (model == DecayModel::power && !(s.front() > 0.0)) throw UsageError("power extrapolation needs s > 0");
  for (double v : values)
    if (!std::isfinite(v)) {
      Extrapolation bad;
      bad.limit = std::numeric_limits<double>::quiet_NaN();
      bad.converged = false;
      return bad;
    }

  const ExponentFit all = fit_exponent(s, values, model, initial_exponent, 0);
  const ExponentFit inner_dropped = fit_exponent(s, values, model, all.exponent, 1);
  Extrapolation out;
  out.limit = all.linear.limit;
  out.coefficient = all.linear.coefficient;
  out.exponent = all.exponent;
  out.residual = std::sqrt(all.linear.sse / static_cast<double>(s.size()));
  out.error_estimate = std::abs(all.linear.limit - inner_dropped.linear.limit);
  out.converged = std::isfinite(out.limit) && out.error_estimate <= tol * std::max(1.0, std::abs(out.limit));
  return out;
}

}  // namespace confmass
