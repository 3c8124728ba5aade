#pragma once

#include <Eigen/Dense>

#include "nodeadapt/linalg.hpp"

namespace nodeadapt {

/// Hidden states of a batch, one column per sample (d x m, column-major).
/// The column-major storage is exactly the stacked m*d batch vector, and the
/// Frobenius norm is the batch norm.
using BatchState = Eigen::MatrixXd;

/// Parameter vector theta = (vec W, b) with vec stacking the columns of W.
using ThetaVec = Eigen::VectorXd;

/// Smooth scalar activation. Only tanh is provided.
struct Activation {
  enum class Kind { Tanh };

  Kind kind = Kind::Tanh;

  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;
  double d3(double s) const;
};

/// Packs (W, b) into a ThetaVec.
ThetaVec pack_theta(const DenseMatrix& weight, const Vector& bias);

/// The vector field f(v, theta) = sigma(W v + b) applied blockwise to a batch,
/// with analytic derivative products.
class NeuralField {
 public:
  explicit NeuralField(Eigen::Index width, Activation activation = {});

  Eigen::Index width() const { return width_; }
  Eigen::Index param_count() const { return width_ * width_ + width_; }
  const Activation& activation() const { return activation_; }

  Eigen::Map<const DenseMatrix> weight(const ThetaVec& theta) const;
  Eigen::Map<const Vector> bias(const ThetaVec& theta) const;

  /// F(x, theta).
  BatchState eval(const BatchState& x, const ThetaVec& theta) const;

  /// D1 F(x, theta)^* p, block i equal to W^T (sigma'(W x^i + b) .* p^i).
  BatchState vjp_state(const BatchState& x, const ThetaVec& theta, const BatchState& p) const;

  /// D2 F(x, theta)^* p in ThetaVec layout.
  ThetaVec vjp_params(const BatchState& x, const ThetaVec& theta, const BatchState& p) const;

 private:
  void check(const BatchState& x, const ThetaVec& theta) const;
  /// sigma'(W x + b) .* p
  DenseMatrix gated(const BatchState& x, const ThetaVec& theta, const BatchState& p) const;

  Eigen::Index width_;
  Activation activation_;
};

}  // namespace nodeadapt
