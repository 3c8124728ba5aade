#include "nodeadapt/neural_field.hpp"

#include <cmath>
#include <string>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

double Activation::value(double s) const { return std::tanh(s); }

double Activation::d1(double s) const {
  const double t = std::tanh(s);
  return 1.0 - t * t;
}

double Activation::d2(double s) const {
  const double t = std::tanh(s);
  return -2.0 * t * (1.0 - t * t);
}

double Activation::d3(double s) const {
  const double t = std::tanh(s);
  const double sech2 = 1.0 - t * t;
  return -2.0 * sech2 * (sech2 - 2.0 * t * t);
}

ThetaVec pack_theta(const DenseMatrix& weight, const Vector& bias) {
  if (weight.rows() != weight.cols() || weight.rows() != bias.size()) {
    throw DimensionError("pack_theta: W must be d x d and b of length d");
  }
  const Eigen::Index d = bias.size();
  ThetaVec theta(d * d + d);
  theta.head(d * d) = Eigen::Map<const Vector>(weight.data(), d * d);
  theta.tail(d) = bias;
  return theta;
}

NeuralField::NeuralField(Eigen::Index width, Activation activation)
    : width_(width), activation_(activation) {
  if (width < 1) throw InvalidArgument("NeuralField: width must be >= 1");
}

Eigen::Map<const DenseMatrix> NeuralField::weight(const ThetaVec& theta) const {
  return {theta.data(), width_, width_};
}

Eigen::Map<const Vector> NeuralField::bias(const ThetaVec& theta) const {
  return {theta.data() + width_ * width_, width_};
}

void NeuralField::check(const BatchState& x, const ThetaVec& theta) const {
  if (theta.size() != param_count()) {
    throw DimensionError("theta has length " + std::to_string(theta.size()) + ", expected " +
                         std::to_string(param_count()));
  }
  if (x.rows() != width_) {
    throw DimensionError("batch state has width " + std::to_string(x.rows()) + ", expected " +
                         std::to_string(width_));
  }
}

BatchState NeuralField::eval(const BatchState& x, const ThetaVec& theta) const {
  check(x, theta);
  BatchState pre = weight(theta) * x;
  pre.colwise() += bias(theta);
  return pre.unaryExpr([this](double s) { return activation_.value(s); });
}

DenseMatrix NeuralField::gated(const BatchState& x, const ThetaVec& theta,
                               const BatchState& p) const {
  check(x, theta);
  if (p.rows() != x.rows() || p.cols() != x.cols()) {
    throw DimensionError("adjoint batch shape does not match the state batch");
  }
  DenseMatrix pre = weight(theta) * x;
  pre.colwise() += bias(theta);
  return pre.unaryExpr([this](double s) { return activation_.d1(s); }).cwiseProduct(p);
}

BatchState NeuralField::vjp_state(const BatchState& x, const ThetaVec& theta,
                                  const BatchState& p) const {
  const DenseMatrix s = gated(x, theta, p);
  return weight(theta).transpose() * s;
}

ThetaVec NeuralField::vjp_params(const BatchState& x, const ThetaVec& theta,
                                 const BatchState& p) const {
  const DenseMatrix s = gated(x, theta, p);
  ThetaVec out(param_count());
  Eigen::Map<DenseMatrix>(out.data(), width_, width_).noalias() = s * x.transpose();
  out.tail(width_) = s.rowwise().sum();
  return out;
}

}  // namespace nodeadapt
