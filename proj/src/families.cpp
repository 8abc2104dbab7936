#include "confmass/families.hpp"

#include <algorithm>
#include <sstream>

#include "confmass/conformal.hpp"
#include "confmass/hyperbolic.hpp"
#include "confmass/quadrature.hpp"

namespace confmass {

namespace {

constexpr double kAfRadialMin = 0.1;
constexpr double kAhRadialMin = 0.05;

Chart af_chart(int n, double rmin = kAfRadialMin) { return Chart(n, ChartKind::cartesian_end, rmin); }
Chart ah_chart(int n, double rmin = kAhRadialMin) { return Chart(n, ChartKind::polar_hyperbolic, rmin); }

Profile zero_profile(double) { return {}; }

// a r^{-tau}
Profile power_profile(double r, double a, double tau) {
  const double v = a * std::pow(r, -tau);
  return {v, -tau * v / r, tau * (tau + 1.0) * v / (r * r)};
}

// a e^{-tau rho}
Profile exp_profile(double rho, double a, double tau) {
  const double v = a * std::exp(-tau * rho);
  return {v, -tau * v, tau * tau * v};
}

// s^{2-n} for the integer dimensions in use
double inv_pow(double s, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out /= s;
  return out;
}

Vector angular_or_zero(const Vector& c, int n) {
  if (c.size() == 0) return Vector::Zero(n);
  if (c.size() != n) throw UsageError("angular coefficient vector must have n components");
  return c;
}

}  // namespace

InitialData flat(int n) {
  auto g = std::make_shared<ConstantMetric>(af_chart(n), Matrix::Identity(n, n));
  return InitialData(g, nullptr, std::max(1.0, n - 2.0), 1.0);
}

InitialData schwarzschild_isotropic(double m) {
  if (!(m > 0.0)) throw UsageError("Schwarzschild mass must be positive");
  // r_min = m/4 keeps the minimal sphere r = m/2 inside the chart
  auto b = [m](double r) {
    const Profile u{1.0 + m / (2.0 * r), -m / (2.0 * r * r), m / (r * r * r)};
    const Profile u2 = u * u;
    return u2 * u2;
  };
  auto g = std::make_shared<RadialMetric>(af_chart(3, 0.25 * m), b, zero_profile);
  return InitialData(g, nullptr, 1.0, 1.0);
}

InitialData conformally_flat(int n, double a, double tau) {
  if (!(tau > 0.0)) throw UsageError("conformally_flat needs tau > 0");
  auto b = [a, tau](double r) { return exp_of(scale(power_profile(r, a, tau), 2.0)); };
  auto g = std::make_shared<RadialMetric>(af_chart(n), b, zero_profile);
  // mu ~ Lap(r^{-tau}) ~ r^{-tau-2}, or |d r^{-tau}|^2 ~ r^{-2tau-2} when r^{-tau} is harmonic
  const bool harmonic = std::abs(tau - (n - 2.0)) < 1e-12;
  const double eps = harmonic ? 2.0 * tau + 2.0 - n : tau + 2.0 - n;
  return InitialData(g, nullptr, tau, eps);
}

BowenYorkCurvature::BowenYorkCurvature(Vector p) : p_(std::move(p)) {
  if (p_.size() != 3) throw UsageError("Bowen-York momentum must have 3 components");
}

TensorSample BowenYorkCurvature::evaluate(const Point& x, int order) const {
  const double r = x.norm();
  if (!(r > 0.0)) throw DomainError("Bowen-York curvature is singular at the origin");
  const double px = p_.dot(x);
  const double r3 = 1.0 / (r * r * r);
  const double r5 = r3 / (r * r);
  const double r7 = r5 / (r * r);
  const Matrix id = Matrix::Identity(3, 3);
  const Matrix sym = p_ * x.transpose() + x * p_.transpose();
  const Matrix xx = x * x.transpose();

  TensorSample out;
  out.t = 1.5 * (sym * r3 - id * px * r3 + xx * px * r5);
  if (order >= 1) {
    for (int k = 0; k < 3; ++k) {
      Matrix d1 = -3.0 * sym * x[k] * r5;
      d1.row(k) += p_.transpose() * r3;
      d1.col(k) += p_ * r3;
      const Matrix d2 = id * (p_[k] * r3 - 3.0 * px * x[k] * r5);
      Matrix d3 = xx * (p_[k] * r5 - 5.0 * px * x[k] * r7);
      d3.row(k) += x.transpose() * px * r5;
      d3.col(k) += x * px * r5;
      out.dt.push_back(1.5 * (d1 - d2 + d3));
    }
  }
  return out;
}

InitialData bowen_york(const Vector& p) {
  auto g = std::make_shared<ConstantMetric>(af_chart(3), Matrix::Identity(3, 3));
  return InitialData(g, std::make_shared<BowenYorkCurvature>(p), 1.0, 1.0);
}

ScalarFieldPtr af_factor(int n, double a, double tau, const Vector& c) {
  if (!(tau > 0.0)) throw UsageError("af_factor needs tau > 0");
  return std::make_shared<RadialAngularScalar>(af_chart(n), [tau](double r) { return power_profile(r, 1.0, tau); },
                                               a, angular_or_zero(c, n));
}

ScalarFieldPtr af_harmonic_factor(int n, double c) {
  if (!(c > -1.0)) throw UsageError("af_harmonic_factor needs c > -1 so the factor stays finite for r >= 0.1");
  const double k = 2.0 / (n - 2.0);
  auto prof = [n, c, k](double r) {
    const double w = 1.0 + 0.5 * c * std::pow(r, 2.0 - n);
    const double w1 = -0.5 * (n - 2.0) * c * std::pow(r, 1.0 - n);
    const double w2 = 0.5 * (n - 2.0) * (n - 1.0) * c * std::pow(r, -static_cast<double>(n));
    return Profile{k * std::log(w), k * w1 / w, k * (w2 / w - w1 * w1 / (w * w))};
  };
  return std::make_shared<RadialAngularScalar>(af_chart(n), prof, 1.0, Vector::Zero(n));
}

AHMetric hyperbolic(int n) {
  return AHMetric(std::make_shared<HyperbolicMetric>(n, kAhRadialMin), static_cast<double>(n));
}

ScalarFieldPtr ah_factor(int n, double a, double tau, const Vector& c) {
  if (!(tau > 0.0)) throw UsageError("ah_factor needs tau > 0");
  return std::make_shared<RadialAngularScalar>(ah_chart(n), [tau](double rho) { return exp_profile(rho, 1.0, tau); },
                                               a, angular_or_zero(c, n));
}

AHMetric ah_conformal(int n, double a, double tau, const Vector& c) {
  auto b = std::make_shared<HyperbolicMetric>(n, kAhRadialMin);
  auto g = std::make_shared<ConformallyDeformedMetric>(b, ah_factor(n, a, tau, c), 1.0);
  return AHMetric(g, tau);
}

// AdS-Schwarzschild radius ------------------------------------------------

AdsSchwarzschildRadius::AdsSchwarzschildRadius(int n, double m) : n_(n), m_(m), horizon_(0.0) {
  if (n != 3 && n != 4) throw UsageError("ads_schwarzschild is available for n = 3 and n = 4");
  if (!(m >= 0.0)) throw UsageError("ads_schwarzschild mass must be non-negative");
  if (m > 0.0) {
    auto v = [this](double r) { return 1.0 + r * r - 2.0 * m_ * std::pow(r, 2.0 - n_); };
    double lo = 0.0;
    double hi = 1.0;
    while (v(hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (v(mid) > 0.0 ? hi : lo) = mid;
    }
    horizon_ = hi;
  }
}

double AdsSchwarzschildRadius::offset(double r) const {
  if (m_ == 0.0) return 0.0;
  if (!(r > horizon_)) throw DomainError("radius inside the AdS-Schwarzschild horizon");
  // integral over s in (r, inf) of 1/sqrt(V) - 1/sqrt(W), with s = r / t
  static const Rule1D gl = gauss_legendre(12);
  constexpr int panels = 24;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      const double s = r / t;
      const double num = 2.0 * m_ * inv_pow(s, n_ - 2);
      const double sv = std::sqrt(1.0 + s * s - num);
      const double sw = std::sqrt(1.0 + s * s);
      sum += 0.5 * (b - a) * gl.w[q] * num / (sv * sw * (sv + sw)) * r / (t * t);
    }
  }
  return sum;
}

AdsRadius AdsSchwarzschildRadius::at(double rho) const {
  // The metric profiles query the same rho several times per evaluation.
  struct Entry {
    int n = 0;
    double m = -1.0;
    double rho = 0.0;
    AdsRadius value;
  };
  thread_local Entry last;
  if (last.n == n_ && last.m == m_ && last.rho == rho) return last.value;
  AdsRadius out = solve(rho);
  last = {n_, m_, rho, out};
  return out;
}

AdsRadius AdsSchwarzschildRadius::solve(double rho) const {
  const double s = std::sinh(rho);
  const double c = std::cosh(rho);
  AdsRadius out;
  if (m_ == 0.0) {
    out.r = {s, c, s};
    return out;
  }
  // Newton on delta = offset(sinh(rho + delta))
  double delta = offset(s);
  for (int it = 0; it < 60; ++it) {
    const double r = std::sinh(rho + delta);
    const double num = 2.0 * m_ * std::pow(r, 2.0 - n_);
    const double sv = std::sqrt(1.0 + r * r - num);
    const double sw = std::sqrt(1.0 + r * r);
    const double h = num / (sv * sw * (sv + sw));  // -d offset / dr
    const double resid = delta - offset(r);
    const double step = resid / (1.0 + h * std::cosh(rho + delta));
    delta -= step;
    if (std::abs(step) <= 1e-16 * std::max(delta, 1e-300)) break;
  }
  const double r = std::sinh(rho + delta);
  const double v = 1.0 + r * r - 2.0 * m_ * std::pow(r, 2.0 - n_);
  const double sv = std::sqrt(v);
  out.r = {r, sv, r + (n_ - 2.0) * m_ * std::pow(r, 1.0 - n_)};
  const double diff = 2.0 * std::cosh(rho + 0.5 * delta) * std::sinh(0.5 * delta);  // r - sinh(rho)
  const double q = diff * (r + s);
  const double dq = 2.0 * (q * (1.0 + r * r + s * s) - 2.0 * m_ * std::pow(r, 4.0 - n_)) / (r * sv + s * c);
  const double ddq = 4.0 * q + (2.0 * n_ - 8.0) * m_ * std::pow(r, 2.0 - n_);
  out.q = {q, dq, ddq};
  return out;
}

AHMetric ads_schwarzschild(int n, double m) {
  auto radius = std::make_shared<const AdsSchwarzschildRadius>(n, m);
  double rho_min = kAhRadialMin;
  if (m > 0.0) rho_min = std::max(rho_min, radius->rho_of_r(2.0 * radius->horizon()));
  // B = r^2 / rho^2 and C = 1 - B; the deviation from b uses q = r^2 - sinh^2 rho
  auto b = [radius](double rho) {
    const Profile r = radius->at(rho).r;
    return over_r2(r * r, rho);
  };
  auto c = [b](double rho) { return Profile{1.0, 0.0, 0.0} - b(rho); };
  auto db = [radius](double rho) { return over_r2(radius->at(rho).q, rho); };
  auto dc = [db](double rho) { return scale(db(rho), -1.0); };
  auto g = std::make_shared<RadialMetric>(ah_chart(n, rho_min), b, c, db, dc);
  return AHMetric(g, static_cast<double>(n));
}

// Specs ------------------------------------------------------------------

double FamilySpec::scalar(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) throw UsageError("parameter '" + key + "' of " + name + " must be a number");
  return it->second.front();
}

double FamilySpec::scalar(const std::string& key) const {
  if (params.find(key) == params.end()) throw UsageError("family " + name + " needs parameter '" + key + "'");
  return scalar(key, 0.0);
}

Vector FamilySpec::vector(const std::string& key, int n) const {
  const auto it = params.find(key);
  if (it == params.end()) return Vector::Zero(n);
  if (static_cast<int>(it->second.size()) != n) {
    std::ostringstream os;
    os << "parameter '" << key << "' of " << name << " must have " << n << " components";
    throw UsageError(os.str());
  }
  return Eigen::Map<const Vector>(it->second.data(), n);
}

namespace {

void allow_only(const FamilySpec& spec, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : spec.params) {
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) throw UsageError("family " + spec.name + " has no parameter '" + key + "'");
  }
}

void require_dimension(const FamilySpec& spec, int n) {
  if (spec.dimension != n) {
    std::ostringstream os;
    os << "family " << spec.name << " is defined for n = " << n << " only";
    throw UsageError(os.str());
  }
}

}  // namespace

FamilyResult make_family(const FamilySpec& spec) {
  const int n = spec.dimension;
  if (n < 3) throw UsageError("dimension must be at least 3");
  if (spec.name == "flat") {
    allow_only(spec, {});
    return flat(n);
  }
  if (spec.name == "schwarzschild_isotropic") {
    allow_only(spec, {"m"});
    require_dimension(spec, 3);
    return schwarzschild_isotropic(spec.scalar("m"));
  }
  if (spec.name == "conformally_flat") {
    allow_only(spec, {"a", "tau"});
    return conformally_flat(n, spec.scalar("a"), spec.scalar("tau", 1.0));
  }
  if (spec.name == "bowen_york") {
    allow_only(spec, {"p"});
    require_dimension(spec, 3);
    return bowen_york(spec.vector("p", 3));
  }
  if (spec.name == "hyperbolic") {
    allow_only(spec, {});
    return hyperbolic(n);
  }
  if (spec.name == "ah_conformal") {
    allow_only(spec, {"a", "tau", "c"});
    return ah_conformal(n, spec.scalar("a"), spec.scalar("tau", static_cast<double>(n)), spec.vector("c", n));
  }
  if (spec.name == "ads_schwarzschild") {
    allow_only(spec, {"m"});
    return ads_schwarzschild(n, spec.scalar("m"));
  }
  throw UsageError("unknown metric family '" + spec.name + "'");
}

ScalarFieldPtr make_factor(const FamilySpec& spec) {
  const int n = spec.dimension;
  if (spec.name == "zero") {
    allow_only(spec, {});
    return std::make_shared<ZeroScalar>(n);
  }
  if (spec.name == "af_factor") {
    allow_only(spec, {"a", "tau", "c"});
    return af_factor(n, spec.scalar("a"), spec.scalar("tau", 1.0), spec.vector("c", n));
  }
  if (spec.name == "af_harmonic_factor") {
    allow_only(spec, {"c"});
    return af_harmonic_factor(n, spec.scalar("c"));
  }
  if (spec.name == "ah_factor") {
    allow_only(spec, {"a", "tau", "c"});
    return ah_factor(n, spec.scalar("a"), spec.scalar("tau", static_cast<double>(n)), spec.vector("c", n));
  }
  throw UsageError("unknown conformal factor family '" + spec.name + "'");
}

SymTensorFieldPtr make_extrinsic(const FamilySpec& spec) {
  if (spec.name == "zero") {
    allow_only(spec, {});
    return std::make_shared<ZeroTensor>(spec.dimension);
  }
  if (spec.name == "bowen_york") {
    allow_only(spec, {"p"});
    require_dimension(spec, 3);
    return std::make_shared<BowenYorkCurvature>(spec.vector("p", 3));
  }
  throw UsageError("unknown extrinsic curvature family '" + spec.name + "'");
}

const std::vector<std::string>& metric_family_names() {
  static const std::vector<std::string> names{"flat",       "schwarzschild_isotropic", "conformally_flat", "bowen_york",
                                              "hyperbolic", "ah_conformal",            "ads_schwarzschild"};
  return names;
}

const std::vector<std::string>& factor_family_names() {
  static const std::vector<std::string> names{"zero", "af_factor", "af_harmonic_factor", "ah_factor"};
  return names;
}

}  // namespace confmass
