#include "nodeadapt/loss_head.hpp"

#include <algorithm>
#include <cmath>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + e^s) without overflow.
double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))); }

Eigen::Index argmax_lowest(const Eigen::Ref<const Vector>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) best = j;
  }
  return best;
}

}  // namespace

TaskHead::TaskHead(HeadKind kind, DenseMatrix w_out, DenseMatrix labels)
    : kind_(kind), w_out_(std::move(w_out)), labels_(std::move(labels)) {
  if (kind_ == HeadKind::BinarySigmoid) {
    if (w_out_.rows() != 1 || labels_.rows() != 1) {
      throw DimensionError("binary head expects a 1 x d output matrix and 1 x m labels");
    }
    for (Eigen::Index i = 0; i < labels_.cols(); ++i) {
      if (labels_(0, i) != 0.0 && labels_(0, i) != 1.0) {
        throw InvalidArgument("binary labels must be 0 or 1");
      }
    }
  } else {
    if (w_out_.rows() != labels_.rows()) {
      throw DimensionError("multiclass head: W_out rows must equal the label dimension");
    }
    for (Eigen::Index i = 0; i < labels_.cols(); ++i) {
      if (std::abs(labels_.col(i).sum() - 1.0) > 1e-12 || labels_.col(i).minCoeff() < 0.0) {
        throw InvalidArgument("multiclass labels must be one-hot");
      }
    }
  }
}

void TaskHead::set_w_out(DenseMatrix w_out) {
  if (w_out.rows() != w_out_.rows() || w_out.cols() != w_out_.cols()) {
    throw DimensionError("set_w_out: shape mismatch");
  }
  w_out_ = std::move(w_out);
}

void TaskHead::check(const BatchState& x_final) const {
  if (x_final.rows() != w_out_.cols() || x_final.cols() != labels_.cols()) {
    throw DimensionError("terminal state shape does not match the head");
  }
}

DenseMatrix TaskHead::logits(const BatchState& x_final) const {
  check(x_final);
  return w_out_ * x_final;
}

DenseMatrix TaskHead::predictions(const BatchState& x_final) const {
  DenseMatrix z = logits(x_final);
  if (kind_ == HeadKind::BinarySigmoid) return z.unaryExpr(&sigmoid);
  for (Eigen::Index i = 0; i < z.cols(); ++i) {
    const double shift = z.col(i).maxCoeff();
    z.col(i) = (z.col(i).array() - shift).exp().matrix();
    z.col(i) /= z.col(i).sum();
  }
  return z;
}

double TaskHead::loss(const BatchState& x_final) const {
  const DenseMatrix z = logits(x_final);
  const auto m = static_cast<double>(z.cols());
  double total = 0.0;
  if (kind_ == HeadKind::BinarySigmoid) {
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    for (Eigen::Index i = 0; i < z.cols(); ++i) total += softplus(z(0, i)) - labels_(0, i) * z(0, i);
  } else {
    for (Eigen::Index i = 0; i < z.cols(); ++i) {
      const double shift = z.col(i).maxCoeff();
      const double lse = shift + std::log((z.col(i).array() - shift).exp().sum());
      total -= labels_.col(i).dot((z.col(i).array() - lse).matrix());
    }
  }
  return std::max(total / m, 0.0);
}

BatchState TaskHead::terminal_gradient(const BatchState& x_final) const {
  const DenseMatrix residual = predictions(x_final) - labels_;
  return (w_out_.transpose() * residual) / static_cast<double>(labels_.cols());
}

DenseMatrix TaskHead::w_out_gradient(const BatchState& x_final) const {
  const DenseMatrix residual = predictions(x_final) - labels_;
  return (residual * x_final.transpose()) / static_cast<double>(labels_.cols());
}

double TaskHead::accuracy(const BatchState& x_final) const {
  const DenseMatrix yhat = predictions(x_final);
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < yhat.cols(); ++i) {
    if (kind_ == HeadKind::BinarySigmoid) {
      const double predicted = yhat(0, i) > 0.5 ? 1.0 : 0.0;
      if (predicted == labels_(0, i)) ++correct;
    } else if (argmax_lowest(yhat.col(i)) == argmax_lowest(labels_.col(i))) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(yhat.cols());
}

}  // namespace nodeadapt
