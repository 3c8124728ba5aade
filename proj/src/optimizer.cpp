#include "nodeadapt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

Optimizer::Optimizer(OptimizerConfig config, std::size_t length)
    : config_(config), first_(length, 0.0), second_(length, 0.0) {
  if (!(config_.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0 && config_.beta2 >= 0.0 && config_.beta2 < 1.0)) {
    throw InvalidArgument("Adam betas must lie in [0, 1)");
  }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != first_.size() || grad.size() != first_.size()) {
    throw DimensionError("optimizer step: shape mismatch (" + std::to_string(params.size()) + " params, " +
                         std::to_string(grad.size()) + " gradient, state " +
                         std::to_string(first_.size()) + ")");
  }
  ++steps_;
  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::GradientDescent) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
    return;
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_[i] = b1 * first_[i] + (1.0 - b1) * grad[i];
    second_[i] = b2 * second_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double m_hat = first_[i] / correction1;
    const double v_hat = second_[i] / correction2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

void Optimizer::step(ControlPath& theta, const NodalParams& grad) {
  if (grad.size() != theta.values.size()) throw DimensionError("optimizer step: node count mismatch");
  const auto n = static_cast<std::size_t>(theta.param_count());
  std::vector<double> flat_params(theta.values.size() * n);
  std::vector<double> flat_grad(flat_params.size());
  for (std::size_t k = 0; k < theta.values.size(); ++k) {
    if (static_cast<std::size_t>(grad[k].size()) != n) throw DimensionError("optimizer step: gradient length");
    std::copy(theta.values[k].data(), theta.values[k].data() + n, flat_params.begin() + k * n);
    std::copy(grad[k].data(), grad[k].data() + n, flat_grad.begin() + k * n);
  }
  step(flat_params, flat_grad);
  for (std::size_t k = 0; k < theta.values.size(); ++k) {
    std::copy(flat_params.begin() + k * n, flat_params.begin() + (k + 1) * n, theta.values[k].data());
  }
}

void Optimizer::on_insert(std::size_t grow_by) {
  const std::size_t length = first_.size() + grow_by;
  first_.assign(length, 0.0);
  second_.assign(length, 0.0);
  steps_ = 0;
}

void Optimizer::restore(std::int64_t steps, std::vector<double> first, std::vector<double> second) {
  if (steps < 0 || first.size() != second.size()) throw InvalidArgument("optimizer restore: bad state");
  steps_ = steps;
  first_ = std::move(first);
  second_ = std::move(second);
}

}  // namespace nodeadapt
