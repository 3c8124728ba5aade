#include "nodeadapt/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodeadapt/dwr_estimator.hpp"
#include "nodeadapt/errors.hpp"

namespace nodeadapt {

const char* to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::Adaptive: return "adaptive";
    case TrainMode::Random: return "random";
    case TrainMode::Fixed: return "fixed";
  }
  return "unknown";
}

const char* to_string(DatasetId dataset) {
  return dataset == DatasetId::SwissRoll ? "swiss_roll" : "peaks";
}

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::ToleranceReached: return "tolerance_reached";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::NonFiniteLoss: return "non_finite_loss";
  }
  return "unknown";
}

void TrainConfig::validate() const {
  if (!(final_time > 0.0) || !std::isfinite(final_time)) throw ConfigError("T must be positive");
  if (width < 1) throw ConfigError("d must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (it_max < 0) throw ConfigError("it_max must be >= 0");
  if (it_up < 1) throw ConfigError("it_up must be >= 1");
  if (initial_intervals < 1) throw ConfigError("initial_intervals must be >= 1");
  if (fixed_intervals < 1) throw ConfigError("fixed_intervals must be >= 1");
  if (sup_samples < 1) throw ConfigError("sup_samples must be >= 1");
}

HeadKind TrainConfig::head() const {
  return dataset == DatasetId::SwissRoll ? HeadKind::BinarySigmoid : HeadKind::MulticlassSoftmax;
}

DatasetSplits load_dataset(const TrainConfig& config) {
  if (config.dataset == DatasetId::SwissRoll) return swiss_roll();
  SeededRng rng(config.data_seed);
  return peaks(rng);
}

Initialization initialize(const TrainConfig& config, Eigen::Index input_dim,
                          Eigen::Index output_dim, SeededRng& rng) {
  config.validate();
  const int intervals =
      config.mode == TrainMode::Fixed ? config.fixed_intervals : config.initial_intervals;
  TimeGrid grid = TimeGrid::uniform(intervals, config.final_time);
  const Eigen::Index d = config.width;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  NodalParams values;
  for (int k = 0; k < grid.node_count(); ++k) {
    values.push_back(gaussian_matrix(rng, d * d + d, 1, scale).col(0));
  }
  DenseMatrix w_in = gaussian_matrix(rng, d, input_dim, 1.0 / std::sqrt(static_cast<double>(input_dim)));
  DenseMatrix w_out = gaussian_matrix(rng, output_dim, d, scale);
  return {ControlPath(std::move(grid), std::move(values)), std::move(w_in), std::move(w_out)};
}

Problem make_problem(const TrainConfig& config, const LabeledSet& set, HeadKind head,
                     const DenseMatrix& w_in, const DenseMatrix& w_out) {
  return Problem{NeuralField(config.width), TaskHead(head, w_out, set.labels), w_in * set.inputs,
                 config.lambda};
}

namespace {

std::vector<double> flatten(const DenseMatrix& m) { return {m.data(), m.data() + m.size()}; }

void assign(DenseMatrix& m, const std::vector<double>& flat) {
  std::copy(flat.begin(), flat.end(), m.data());
}

// Plain Adam/GD step on a dense matrix; used only for the optional W_in/W_out training.
void step_matrix(Optimizer& opt, DenseMatrix& m, const DenseMatrix& grad) {
  std::vector<double> params = flatten(m);
  opt.step(params, flatten(grad));
  assign(m, params);
}

}  // namespace

TrainRecord train(const TrainConfig& config, const DatasetSplits& data,
                  const IterationCallback& on_iteration) {
  config.validate();
  if (data.head != config.head()) throw ConfigError("dataset does not match the head kind");
  SeededRng rng(config.seed);
  Initialization init = initialize(config, data.input_dim(), data.output_dim(), rng);
  ControlPath theta = std::move(init.theta);
  DenseMatrix w_in = std::move(init.w_in);
  DenseMatrix w_out = std::move(init.w_out);

  Problem problem = make_problem(config, data.train, data.head, w_in, w_out);
  Problem validation = make_problem(config, data.validation, data.head, w_in, w_out);
  const auto n = static_cast<std::size_t>(problem.field.param_count());
  const OptimizerConfig opt_config{config.optimizer, config.learning_rate};
  Optimizer optimizer(opt_config, theta.values.size() * n);
  Optimizer w_in_optimizer(opt_config, static_cast<std::size_t>(w_in.size()));
  Optimizer w_out_optimizer(opt_config, static_cast<std::size_t>(w_out.size()));

  std::vector<IterationLog> log;
  std::vector<InsertionEvent> insertions;
  const std::vector<double> initial_nodes = theta.grid.nodes();
  Termination termination = Termination::MaxIterations;
  std::string message;
  int iterations = 0;

  try {
    for (int it = 1; it <= config.it_max; ++it) {
      GradientBundle bundle = compute_gradient(problem, theta);
      if (!std::isfinite(bundle.loss)) throw NonFiniteError("training loss is not finite");
      const ForwardPass val = forward(validation, theta);
      IterationLog entry{it, bundle.loss, val.loss,
                         validation.head.accuracy(val.state.values.back()), theta.grid.intervals()};
      log.push_back(entry);
      iterations = it;
      if (on_iteration) on_iteration(entry);
      if (bundle.loss <= config.tol) {
        termination = Termination::ToleranceReached;
        break;
      }

      optimizer.step(theta, bundle.gradient);
      if (config.trainable_io) {
        const DenseMatrix w_in_grad = bundle.adjoint.values.front() * data.train.inputs.transpose();
        step_matrix(w_out_optimizer, w_out, problem.head.w_out_gradient(bundle.state.values.back()));
        step_matrix(w_in_optimizer, w_in, w_in_grad);
        problem.head.set_w_out(w_out);
        validation.head.set_w_out(w_out);
        problem.x_in = w_in * data.train.inputs;
        validation.x_in = w_in * data.validation.inputs;
      }

      if (config.mode == TrainMode::Fixed || it % config.it_up != 0) continue;
      int k_star = 1;
      if (config.mode == TrainMode::Adaptive) {
        const ForwardPass pass = forward(problem, theta);
        const AdjointTrajectory adjoint = backward(problem, theta, pass.state);
        k_star = indicate(problem.field, pass.state, theta, adjoint, config.lambda,
                          SupSampling{config.sup_samples})
                     .argmax;
      } else {
        k_star = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(theta.grid.intervals())));
      }
      const double t_new = theta.grid.midpoint(k_star);
      theta = theta.insert_midpoint(k_star);
      optimizer.on_insert(n);
      insertions.push_back({it, k_star, t_new, theta.grid.nodes()});
    }
  } catch (const NonFiniteError& e) {
    termination = Termination::NonFiniteLoss;
    message = e.what();
  }

  TrainRecord record{.config = config,
                     .log = std::move(log),
                     .initial_nodes = initial_nodes,
                     .insertions = std::move(insertions),
                     .theta = theta,
                     .w_in = w_in,
                     .w_out = w_out};
  record.iterations = iterations;
  record.termination = termination;
  record.message = std::move(message);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  record.final_train_loss = record.final_val_loss = record.final_val_accuracy = nan;
  if (termination != Termination::NonFiniteLoss) {
    try {
      const ForwardPass train_pass = forward(problem, theta);
      const ForwardPass val_pass = forward(validation, theta);
      record.final_train_loss = train_pass.loss;
      record.final_val_loss = val_pass.loss;
      record.final_val_accuracy = validation.head.accuracy(val_pass.state.values.back());
    } catch (const NonFiniteError& e) {
      record.termination = Termination::NonFiniteLoss;
      record.message = e.what();
    }
  }
  record.optimizer_steps = optimizer.step_count();
  record.optimizer_first = optimizer.first_moment();
  record.optimizer_second = optimizer.second_moment();
  record.rng_state = rng.serialize();
  return record;
}

}  // namespace nodeadapt
