#include "confmass/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confmass {

Chart::Chart(int n, ChartKind k, double rmin) : dimension(n), kind(k), radial_min(rmin) {
  if (n < 3) throw UsageError("chart dimension must be at least 3");
  if (!(rmin >= 0.0)) throw UsageError("chart radial bound must be non-negative");
}

bool Chart::contains(const Point& x) const {
  return x.size() == dimension && std::isfinite(x.norm()) && x.norm() >= radial_min;
}

void Chart::require(const Point& x) const {
  if (x.size() != dimension) {
    std::ostringstream os;
    os << "point has " << x.size() << " coordinates, chart dimension is " << dimension;
    throw DomainError(os.str());
  }
  if (!contains(x)) {
    std::ostringstream os;
    os << "point at radius " << x.norm() << " is inside the excised region (min " << radial_min << ")";
    throw DomainError(os.str());
  }
}

MetricSample zero_metric_sample(int n, int order) {
  MetricSample s;
  s.g = Matrix::Zero(n, n);
  if (order >= 1) s.dg.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  if (order >= 2) s.ddg.assign(static_cast<std::size_t>(n * n), Matrix::Zero(n, n));
  return s;
}

MetricAtPoint::MetricAtPoint(Matrix g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0) throw UsageError("metric must be a square matrix");
  if (!g_.allFinite()) throw DegenerateMetricError("metric has non-finite components");
  Eigen::LLT<Matrix> llt(g_);
  if (llt.info() != Eigen::Success) throw DegenerateMetricError("metric is not positive definite");
  const Matrix& l = llt.matrixLLT();
  double d = 1.0;
  for (int i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) throw DegenerateMetricError("metric is not positive definite");
    d *= l(i, i) * l(i, i);
  }
  det_ = d;
  inv_ = llt.solve(Matrix::Identity(g_.rows(), g_.cols()));
  inv_ = 0.5 * (inv_ + inv_.transpose()).eval();
}

namespace {

void require_length(const MetricAtPoint& g, Eigen::Index len) {
  if (len != g.dimension()) throw UsageError("tensor length does not match metric dimension");
}

}  // namespace

VectorAtPoint raise(const MetricAtPoint& g, const VectorAtPoint& v) {
  require_length(g, v.c.size());
  if (v.index != IndexType::covariant) throw UsageError("raise expects a covariant vector");
  return {g.inverse() * v.c, IndexType::contravariant};
}

VectorAtPoint lower(const MetricAtPoint& g, const VectorAtPoint& v) {
  require_length(g, v.c.size());
  if (v.index != IndexType::contravariant) throw UsageError("lower expects a contravariant vector");
  return {g.g() * v.c, IndexType::covariant};
}

SymTensor2 raise(const MetricAtPoint& g, const SymTensor2& t) {
  require_length(g, t.c.rows());
  if (t.index != IndexType::covariant) throw UsageError("raise expects a covariant 2-tensor");
  Matrix up = g.inverse() * t.c * g.inverse();
  return {0.5 * (up + up.transpose()), IndexType::contravariant};
}

SymTensor2 lower(const MetricAtPoint& g, const SymTensor2& t) {
  require_length(g, t.c.rows());
  if (t.index != IndexType::contravariant) throw UsageError("lower expects a contravariant 2-tensor");
  Matrix down = g.g() * t.c * g.g();
  return {0.5 * (down + down.transpose()), IndexType::covariant};
}

double trace(const MetricAtPoint& g, const SymTensor2& t) {
  require_length(g, t.c.rows());
  switch (t.index) {
    case IndexType::covariant: return (g.inverse().cwiseProduct(t.c)).sum();
    case IndexType::contravariant: return (g.g().cwiseProduct(t.c)).sum();
    case IndexType::mixed: return t.c.trace();
  }
  return 0.0;
}

double norm(const MetricAtPoint& g, const VectorAtPoint& v) {
  require_length(g, v.c.size());
  double q = 0.0;
  switch (v.index) {
    case IndexType::covariant: q = v.c.dot(g.inverse() * v.c); break;
    case IndexType::contravariant: q = v.c.dot(g.g() * v.c); break;
    case IndexType::mixed: throw UsageError("a vector cannot have mixed index type");
  }
  return std::sqrt(std::max(q, 0.0));
}

double norm(const MetricAtPoint& g, const SymTensor2& t) {
  require_length(g, t.c.rows());
  double q = 0.0;
  switch (t.index) {
    case IndexType::covariant: q = (g.inverse() * t.c * g.inverse()).cwiseProduct(t.c).sum(); break;
    case IndexType::contravariant: q = (g.g() * t.c * g.g()).cwiseProduct(t.c).sum(); break;
    case IndexType::mixed: q = (t.c * t.c).trace(); break;
  }
  return std::sqrt(std::max(q, 0.0));
}

TensorResult tensor_algebra(const MetricAtPoint& g, const TensorOperand& t, TensorAction action) {
  return std::visit(
      [&](const auto& operand) -> TensorResult {
        using T = std::decay_t<decltype(operand)>;
        switch (action) {
          case TensorAction::raise: return raise(g, operand);
          case TensorAction::lower: return lower(g, operand);
          case TensorAction::norm: return norm(g, operand);
          case TensorAction::trace:
            if constexpr (std::is_same_v<T, SymTensor2>) {
              return trace(g, operand);
            } else {
              throw UsageError("trace is defined for 2-tensors only");
            }
        }
        throw UsageError("unknown tensor action");
      },
      t);
}

ConstantMetric::ConstantMetric(Chart chart, Matrix g) : chart_(chart), g_(std::move(g)) {
  if (g_.rows() != chart_.dimension || g_.cols() != chart_.dimension)
    throw UsageError("constant metric dimension mismatch");
  MetricAtPoint check(g_);
}

MetricSample ConstantMetric::evaluate(const Point& x, int order) const {
  chart_.require(x);
  MetricSample s = zero_metric_sample(chart_.dimension, order);
  s.g = g_;
  return s;
}

ScalarSample ZeroScalar::evaluate(const Point& x, int order) const {
  if (x.size() != n_) throw DomainError("point dimension mismatch");
  ScalarSample s;
  if (order >= 1) s.grad = Vector::Zero(n_);
  if (order >= 2) s.hess = Matrix::Zero(n_, n_);
  return s;
}

ScalarSample ScaledScalar::evaluate(const Point& x, int order) const {
  ScalarSample s = f_->evaluate(x, order);
  s.value *= s_;
  if (order >= 1) s.grad *= s_;
  if (order >= 2) s.hess *= s_;
  return s;
}

TensorSample ZeroTensor::evaluate(const Point& x, int order) const {
  if (x.size() != n_) throw DomainError("point dimension mismatch");
  TensorSample s;
  s.t = Matrix::Zero(n_, n_);
  if (order >= 1) s.dt.assign(static_cast<std::size_t>(n_), Matrix::Zero(n_, n_));
  return s;
}

}  // namespace confmass
