#pragma once

#include "nodeadapt/linalg.hpp"
#include "nodeadapt/neural_field.hpp"

namespace nodeadapt {

enum class HeadKind { BinarySigmoid, MulticlassSoftmax };

/// Output map W_out followed by sigmoid (binary) or softmax (multiclass),
/// scored with cross-entropy.
///
/// Labels are stored one column per sample: a 1 x m row of 0/1 values for the
/// binary head, a d_out x m one-hot matrix for the multiclass head.
class TaskHead {
 public:
  TaskHead(HeadKind kind, DenseMatrix w_out, DenseMatrix labels);

  HeadKind kind() const { return kind_; }
  const DenseMatrix& w_out() const { return w_out_; }
  const DenseMatrix& labels() const { return labels_; }
  Eigen::Index sample_count() const { return labels_.cols(); }

  void set_w_out(DenseMatrix w_out);

  /// W_out x^i(T) for every sample.
  DenseMatrix logits(const BatchState& x_final) const;
  /// Sigmoid or softmax of the logits.
  DenseMatrix predictions(const BatchState& x_final) const;

  /// Mean negative log-likelihood, >= 0.
  double loss(const BatchState& x_final) const;
  /// l'(x(T)): block i is (1/m) W_out^T (yhat^i - y^i).
  BatchState terminal_gradient(const BatchState& x_final) const;
  /// d l / d W_out = (1/m) sum_i (yhat^i - y^i) x^i(T)^T.
  DenseMatrix w_out_gradient(const BatchState& x_final) const;
  /// Fraction of samples classified correctly (threshold 0.5 / argmax with
  /// lowest-index ties).
  double accuracy(const BatchState& x_final) const;

 private:
  void check(const BatchState& x_final) const;

  HeadKind kind_;
  DenseMatrix w_out_;
  DenseMatrix labels_;
};

}  // namespace nodeadapt
