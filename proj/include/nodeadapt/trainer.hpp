#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nodeadapt/datasets.hpp"
#include "nodeadapt/objective.hpp"
#include "nodeadapt/optimizer.hpp"

namespace nodeadapt {

enum class TrainMode { Adaptive, Random, Fixed };
enum class DatasetId { SwissRoll, Peaks };
enum class Termination { ToleranceReached, MaxIterations, NonFiniteLoss };

const char* to_string(TrainMode mode);
const char* to_string(DatasetId dataset);
const char* to_string(Termination reason);

struct TrainConfig {
  DatasetId dataset = DatasetId::SwissRoll;
  TrainMode mode = TrainMode::Adaptive;
  double final_time = 20.0;
  int width = 4;
  double lambda = 1e-3;
  double learning_rate = 5e-3;
  double tol = 0.025;
  int it_max = 3000;
  int it_up = 50;
  int initial_intervals = 1;
  int fixed_intervals = 1;  // depth used in fixed mode
  std::uint64_t seed = 0;
  std::uint64_t data_seed = 0;  // only the Peaks sampler consumes it
  int sup_samples = 5;
  OptimizerKind optimizer = OptimizerKind::Adam;
  bool trainable_io = false;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  HeadKind head() const;
};

DatasetSplits load_dataset(const TrainConfig& config);

struct Initialization {
  ControlPath theta;
  DenseMatrix w_in;   // d x d_in
  DenseMatrix w_out;  // d_out x d
};

/// Draw order: nodal controls (node by node), W_in, W_out.
Initialization initialize(const TrainConfig& config, Eigen::Index input_dim,
                          Eigen::Index output_dim, SeededRng& rng);

struct IterationLog {
  int iteration = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  int intervals = 0;
};

struct InsertionEvent {
  int iteration = 0;
  int interval = 0;  // 1-based interval that was bisected
  double time = 0.0;
  std::vector<double> nodes;  // grid after insertion
};

struct TrainRecord {
  TrainConfig config;
  std::vector<IterationLog> log;
  std::vector<double> initial_nodes;
  std::vector<InsertionEvent> insertions;
  ControlPath theta;
  DenseMatrix w_in;
  DenseMatrix w_out;
  int iterations = 0;
  Termination termination = Termination::MaxIterations;
  std::string message{};
  double final_train_loss = 0.0;
  double final_val_loss = 0.0;
  double final_val_accuracy = 0.0;
  std::int64_t optimizer_steps = 0;
  std::vector<double> optimizer_first{};
  std::vector<double> optimizer_second{};
  std::string rng_state{};

  bool reached_tolerance() const { return termination == Termination::ToleranceReached; }
  int intervals() const { return theta.grid.intervals(); }
};

using IterationCallback = std::function<void(const IterationLog&)>;

/// Problem bundle for a split under the given head/input weights.
Problem make_problem(const TrainConfig& config, const LabeledSet& set, HeadKind head,
                     const DenseMatrix& w_in, const DenseMatrix& w_out);

TrainRecord train(const TrainConfig& config, const DatasetSplits& data,
                  const IterationCallback& on_iteration = {});

}  // namespace nodeadapt
