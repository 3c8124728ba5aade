#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nodeadapt/trajectory.hpp"

namespace nodeadapt {

enum class OptimizerKind { Adam, GradientDescent };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam (or plain gradient descent) over a flat parameter array.
///
/// Moment arrays have the same length as the parameters they update; a layer
/// insertion zeroes all statistics, restarts the step counter and grows the
/// arrays by one parameter vector.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, std::size_t length);

  const OptimizerConfig& config() const { return config_; }
  std::size_t length() const { return first_.size(); }
  std::int64_t step_count() const { return steps_; }
  const std::vector<double>& first_moment() const { return first_; }
  const std::vector<double>& second_moment() const { return second_; }

  /// params <- params - update(grad), advancing the state.
  void step(std::span<double> params, std::span<const double> grad);

  /// Convenience for nodal controls laid out node by node.
  void step(ControlPath& theta, const NodalParams& grad);

  /// Full reset to a zero state of length length() + grow_by.
  void on_insert(std::size_t grow_by);

  void restore(std::int64_t steps, std::vector<double> first, std::vector<double> second);

 private:
  OptimizerConfig config_;
  std::int64_t steps_ = 0;
  std::vector<double> first_;
  std::vector<double> second_;
};

}  // namespace nodeadapt
