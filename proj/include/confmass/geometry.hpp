#pragma once

// Charts, pointwise tensor containers, field oracles and index algebra.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "confmass/errors.hpp"

namespace confmass {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ChartKind { cartesian_end, polar_hyperbolic };

/// A single coordinate chart. Both kinds use coordinates x in R^n whose
/// Euclidean length is the radial coordinate: r for an asymptotically flat
/// end, geodesic distance rho for the hyperbolic chart (x = rho * theta).
struct Chart {
  int dimension = 3;
  ChartKind kind = ChartKind::cartesian_end;
  double radial_min = 0.0;

  Chart() = default;
  Chart(int n, ChartKind k, double rmin);

  double radius(const Point& x) const { return x.norm(); }
  bool contains(const Point& x) const;
  /// Throws DomainError when x is outside the chart or has the wrong length.
  void require(const Point& x) const;
};

enum class Provenance { analytic, finite_difference };
enum class IndexType { covariant, contravariant, mixed };

struct SymTensor2 {
  Matrix c;
  IndexType index = IndexType::covariant;
};

struct VectorAtPoint {
  Vector c;
  IndexType index = IndexType::contravariant;
};

struct ScalarSample {
  double value = 0.0;
  Vector grad;  // d_i f
  Matrix hess;  // d_i d_j f
};

struct MetricSample {
  Matrix g;                 // g_ij
  std::vector<Matrix> dg;   // dg[k](i, j) = d_k g_ij
  std::vector<Matrix> ddg;  // ddg[l * n + k](i, j) = d_l d_k g_ij

  int dimension() const { return static_cast<int>(g.rows()); }
  const Matrix& d2(int l, int k) const { return ddg[static_cast<std::size_t>(l * g.rows() + k)]; }
};

/// Symmetric 2-tensor field sample with first partial derivatives.
struct TensorSample {
  Matrix t;
  std::vector<Matrix> dt;  // dt[k](i, j) = d_k t_ij
};

MetricSample zero_metric_sample(int n, int order);

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int dimension() const = 0;
  /// order 0: value; 1: + gradient; 2: + Hessian.
  virtual ScalarSample evaluate(const Point& x, int order) const = 0;
  virtual Provenance provenance() const { return Provenance::analytic; }
};

class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual const Chart& chart() const = 0;
  virtual MetricSample evaluate(const Point& x, int order) const = 0;
  virtual Provenance provenance() const { return Provenance::analytic; }
  /// g - b for the hyperbolic metric b of the chart, when the field can
  /// produce it without subtracting nearly equal numbers.
  virtual std::optional<MetricSample> hyperbolic_deviation(const Point& /*x*/, int /*order*/) const {
    return std::nullopt;
  }
  int dimension() const { return chart().dimension; }
};

class SymTensorField {
 public:
  virtual ~SymTensorField() = default;
  virtual int dimension() const = 0;
  virtual IndexType index() const { return IndexType::covariant; }
  /// order 0: components; 1: + first partial derivatives.
  virtual TensorSample evaluate(const Point& x, int order) const = 0;
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;
using MetricFieldPtr = std::shared_ptr<const MetricField>;
using SymTensorFieldPtr = std::shared_ptr<const SymTensorField>;

/// Metric components at a point with a Cholesky factorization.
class MetricAtPoint {
 public:
  explicit MetricAtPoint(Matrix g);

  const Matrix& g() const { return g_; }
  const Matrix& inverse() const { return inv_; }
  double det() const { return det_; }
  int dimension() const { return static_cast<int>(g_.rows()); }

 private:
  Matrix g_;
  Matrix inv_;
  double det_ = 0.0;
};

VectorAtPoint raise(const MetricAtPoint& g, const VectorAtPoint& v);
VectorAtPoint lower(const MetricAtPoint& g, const VectorAtPoint& v);
SymTensor2 raise(const MetricAtPoint& g, const SymTensor2& t);
SymTensor2 lower(const MetricAtPoint& g, const SymTensor2& t);
double trace(const MetricAtPoint& g, const SymTensor2& t);
double norm(const MetricAtPoint& g, const VectorAtPoint& v);
double norm(const MetricAtPoint& g, const SymTensor2& t);

enum class TensorAction { raise, lower, trace, norm };
using TensorOperand = std::variant<SymTensor2, VectorAtPoint>;
using TensorResult = std::variant<SymTensor2, VectorAtPoint, double>;

TensorResult tensor_algebra(const MetricAtPoint& g, const TensorOperand& t, TensorAction action);

// Concrete fields used throughout.

class ConstantMetric final : public MetricField {
 public:
  ConstantMetric(Chart chart, Matrix g);
  const Chart& chart() const override { return chart_; }
  MetricSample evaluate(const Point& x, int order) const override;

 private:
  Chart chart_;
  Matrix g_;
};

class ZeroScalar final : public ScalarField {
 public:
  explicit ZeroScalar(int n) : n_(n) {}
  int dimension() const override { return n_; }
  ScalarSample evaluate(const Point& x, int order) const override;

 private:
  int n_;
};

/// s * f
class ScaledScalar final : public ScalarField {
 public:
  ScaledScalar(ScalarFieldPtr f, double s) : f_(std::move(f)), s_(s) {}
  int dimension() const override { return f_->dimension(); }
  ScalarSample evaluate(const Point& x, int order) const override;
  Provenance provenance() const override { return f_->provenance(); }

 private:
  ScalarFieldPtr f_;
  double s_;
};

class ZeroTensor final : public SymTensorField {
 public:
  explicit ZeroTensor(int n) : n_(n) {}
  int dimension() const override { return n_; }
  TensorSample evaluate(const Point& x, int order) const override;

 private:
  int n_;
};

/// Max-abs entry of a matrix or vector, the norm used for tolerance scales.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace confmass
