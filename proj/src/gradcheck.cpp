#include "nodeadapt/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nodeadapt/errors.hpp"
#include "nodeadapt/oracles.hpp"

namespace nodeadapt {

namespace {

DenseMatrix random_labels(HeadKind head, Eigen::Index classes, Eigen::Index samples, SeededRng& rng) {
  if (head == HeadKind::BinarySigmoid) {
    DenseMatrix y(1, samples);
    for (Eigen::Index i = 0; i < samples; ++i) y(0, i) = static_cast<double>(rng.uniform_index(2));
    return y;
  }
  DenseMatrix y = DenseMatrix::Zero(classes, samples);
  for (Eigen::Index i = 0; i < samples; ++i) {
    y(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(classes))), i) = 1.0;
  }
  return y;
}

ControlPath sample_on(const ControlPath& path, const TimeGrid& grid) {
  NodalParams values;
  for (double t : grid.nodes()) values.push_back(path.at(t));
  return {grid, std::move(values)};
}

ControlPath random_path(const TimeGrid& grid, Eigen::Index n, double scale, SeededRng& rng) {
  NodalParams values;
  for (int k = 0; k < grid.node_count(); ++k) values.push_back(gaussian_matrix(rng, n, 1, scale).col(0));
  return {grid, std::move(values)};
}

CheckResult tolerance_check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value < tolerance, "max relative error <"};
}

}  // namespace

RandomInstance make_random_instance(const InstanceSpec& shape, SeededRng& rng) {
  if (shape.intervals < 1 || shape.width < 1 || shape.samples < 1) {
    throw InvalidArgument("make_random_instance: sizes must be positive");
  }
  std::vector<double> nodes{0.0};
  if (shape.nonuniform) {
    std::vector<double> steps;
    double total = 0.0;
    for (int k = 0; k < shape.intervals; ++k) {
      steps.push_back(0.5 + rng.uniform());
      total += steps.back();
    }
    for (double s : steps) nodes.push_back(nodes.back() + s * shape.final_time / total);
    nodes.back() = shape.final_time;
  } else {
    nodes = TimeGrid::uniform(shape.intervals, shape.final_time).nodes();
  }
  const Eigen::Index d = shape.width;
  const Eigen::Index classes = shape.head == HeadKind::BinarySigmoid ? 1 : 3;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ControlPath theta = random_path(TimeGrid(nodes), d * d + d, scale, rng);
  BatchState x_in = gaussian_matrix(rng, d, shape.samples, 1.0);
  DenseMatrix w_out = gaussian_matrix(rng, classes, d, scale);
  DenseMatrix labels = random_labels(shape.head, classes, shape.samples, rng);
  Problem problem{NeuralField(d), TaskHead(shape.head, std::move(w_out), std::move(labels)),
                  std::move(x_in), shape.lambda};
  return {std::move(problem), std::move(theta)};
}

double componentwise_relative_error(const Vector& a, const Vector& b, double floor) {
  if (a.size() != b.size()) throw DimensionError("relative error: length mismatch");
  const double scale = b.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max(std::abs(b(i)), floor * scale);
    const double diff = std::abs(a(i) - b(i));
    worst = std::max(worst, denom > 0.0 ? diff / denom : diff);
  }
  return worst;
}

double normwise_relative_error(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("relative error: length mismatch");
  const double scale = b.cwiseAbs().maxCoeff();
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

double h1_consistency_error(const Problem& problem, const ControlPath& theta,
                            const std::vector<ControlPath>& directions, const TimeGrid& grid) {
  const ControlPath sampled = sample_on(theta, grid);
  const GradientBundle bundle = compute_gradient(problem, sampled);
  const std::size_t nodes = sampled.values.size();
  const oracle::ScalarFunction objective = [&](const Vector& flat) {
    return full_objective(problem, ControlPath(grid, oracle::unflatten(flat, nodes)));
  };
  const Vector base = oracle::flatten(sampled.values);
  double err = 0.0;
  double ref = 0.0;
  for (const ControlPath& direction : directions) {
    const ControlPath delta = sample_on(direction, grid);
    const double predicted = h1_inner(bundle.fem, delta.values, bundle.gradient);
    const double fd = oracle::fd_directional(objective, base, oracle::flatten(delta.values));
    err += std::abs(predicted - fd);
    ref += std::abs(fd);
  }
  return ref > 0.0 ? err / ref : err;
}

H1Consistency h1_consistency_study(const Problem& problem, const ControlPath& theta,
                                   int directions, int levels, SeededRng& rng) {
  if (levels < 2 || directions < 1) throw InvalidArgument("h1_consistency_study: need >= 2 levels");
  std::vector<ControlPath> dirs;
  for (int i = 0; i < directions; ++i) dirs.push_back(random_path(theta.grid, theta.param_count(), 1.0, rng));
  H1Consistency out;
  TimeGrid grid = theta.grid;
  for (int level = 0; level < levels; ++level) {
    out.intervals.push_back(grid.intervals());
    out.errors.push_back(h1_consistency_error(problem, theta, dirs, grid));
    grid = grid.refined(2);
  }
  for (std::size_t i = 0; i + 1 < out.errors.size(); ++i) {
    out.ratios.push_back(out.errors[i] / out.errors[i + 1]);
  }
  return out;
}

bool GradcheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  SeededRng rng(options.seed);
  RandomInstance inst = make_random_instance(options.instance, rng);
  const Problem& problem = inst.problem;
  const NeuralField& field = problem.field;
  const ControlPath& theta = inst.theta;
  const Eigen::Index d = field.width();
  const Eigen::Index m = problem.x_in.cols();
  const double tol = options.tolerance;
  GradcheckReport report;

  const BatchState x = gaussian_matrix(rng, d, m, 1.0);
  const BatchState p = gaussian_matrix(rng, d, m, 1.0);
  const ThetaVec th = theta.values.front();
  auto as_batch = [&](const Vector& flat) { return Eigen::Map<const BatchState>(flat.data(), d, m); };

  {
    BatchState analytic = field.vjp_state(x, th, p);
    if (options.corrupt_vjp) analytic *= 1.01;
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& flat) { return p.cwiseProduct(field.eval(as_batch(flat), th)).sum(); },
        x.reshaped());
    report.checks.push_back(tolerance_check("vjp_state", normwise_relative_error(analytic.reshaped(), fd), tol));
  }
  {
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& flat) { return p.cwiseProduct(field.eval(x, flat)).sum(); }, th);
    report.checks.push_back(
        tolerance_check("vjp_params", normwise_relative_error(field.vjp_params(x, th, p), fd), tol));
  }
  {
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& flat) { return problem.head.loss(as_batch(flat)); }, x.reshaped());
    report.checks.push_back(tolerance_check(
        "terminal_gradient", normwise_relative_error(problem.head.terminal_gradient(x).reshaped(), fd), tol));
  }
  {
    const ForwardPass pass = forward(problem, theta);
    const AdjointTrajectory adjoint = backward(problem, theta, pass.state);
    const Vector analytic =
        oracle::flatten(nodal_chain_rule_gradient(field, theta, pass.state, adjoint));
    const std::size_t nodes = theta.values.size();
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& flat) {
          return data_loss(problem, ControlPath(theta.grid, oracle::unflatten(flat, nodes)));
        },
        oracle::flatten(theta.values));
    report.checks.push_back(
        tolerance_check("nodal_gradient", componentwise_relative_error(analytic, fd), tol));
  }
  {
    const H1Consistency study = h1_consistency_study(problem, theta, 20, 3, rng);
    const double worst = *std::min_element(study.ratios.begin(), study.ratios.end());
    report.checks.push_back({"h1_consistency_ratio", worst, options.min_ratio, worst >= options.min_ratio,
                             "error reduction per bisection >="});
  }
  return report;
}

void print_report(std::ostream& out, const GradcheckReport& report) {
  const auto precision = out.precision(3);
  for (const CheckResult& c : report.checks) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << std::scientific << c.value
        << " (" << c.criterion << ' ' << c.tolerance << ")\n"
        << std::defaultfloat;
  }
  out << (report.passed() ? "gradcheck passed" : "gradcheck FAILED") << '\n';
  out.precision(precision);
}

}  // namespace nodeadapt
