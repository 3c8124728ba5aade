#include "nodeadapt/dwr_estimator.hpp"

#include <cmath>
#include <ostream>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

namespace {

std::vector<double> sample_points(SupSampling sampling) {
  if (sampling.samples < 1) throw InvalidArgument("sup sampling needs at least one point");
  if (sampling.samples == 1) return {0.5};
  std::vector<double> s(static_cast<std::size_t>(sampling.samples));
  for (int j = 0; j < sampling.samples; ++j) {
    s[static_cast<std::size_t>(j)] = static_cast<double>(j) / (sampling.samples - 1);
  }
  return s;
}

ThetaVec interpolate(const ControlPath& theta, int k, double s) {
  const auto i = static_cast<std::size_t>(k);
  return (1.0 - s) * theta.values[i - 1] + s * theta.values[i];
}

double jump_weight(double tau, double neighbour) { return tau / (tau + neighbour); }

void check_consistent(const StateTrajectory& state, const ControlPath& theta) {
  require_same_grid(state.grid, theta.grid, "dwr estimator");
  if (static_cast<int>(state.values.size()) != theta.grid.node_count()) {
    throw DimensionError("dwr estimator: state node count mismatch");
  }
}

}  // namespace

ThetaVec QuadraticReconstruction::eval(int k, double s) const {
  const auto i = static_cast<std::size_t>(k - 1);
  return (a[i] * s + b[i]) * s + c[i];
}

ThetaVec QuadraticReconstruction::derivative(int k, double s, double tau) const {
  const auto i = static_cast<std::size_t>(k - 1);
  return (2.0 * s * a[i] + b[i]) / tau;
}

QuadraticReconstruction reconstruct_quadratic(const ControlPath& theta) {
  const int intervals = theta.grid.intervals();
  QuadraticReconstruction q;
  ThetaVec slope = ThetaVec::Zero(theta.param_count());  // S_{k-1}, S_0 = 0
  for (int k = 1; k <= intervals; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double tau = theta.grid.step(k);
    const ThetaVec delta = theta.values[i] - theta.values[i - 1];
    ThetaVec b = slope * tau;
    q.a.push_back(delta - b);
    q.b.push_back(std::move(b));
    q.c.push_back(theta.values[i - 1]);
    slope = delta / tau;
  }
  return q;
}

ControlIntegrals control_integrals(const ControlPath& theta, const QuadraticReconstruction& q,
                                   int k) {
  const auto i = static_cast<std::size_t>(k);
  const double tau = theta.grid.step(k);
  const ThetaVec& left = theta.values[i - 1];
  const ThetaVec& right = theta.values[i];
  const ThetaVec& a = q.a[i - 1];
  const ThetaVec& b = q.b[i - 1];
  const ThetaVec& c = q.c[i - 1];

  // int_0^1 (1-s) vartheta ds and int_0^1 s vartheta ds
  const ThetaVec alpha = a / 12.0 + b / 6.0 + c / 2.0;
  const ThetaVec beta = a / 4.0 + b / 3.0 + c / 2.0;
  const ThetaVec delta = right - left;

  ControlIntegrals out;
  out.theta_vartheta = tau * (left.dot(alpha) + right.dot(beta));
  out.theta_theta = tau / 3.0 * (left.squaredNorm() + right.squaredNorm()) + tau / 3.0 * left.dot(right);
  out.dtheta_dvartheta = delta.dot(a + b) / tau;
  out.dtheta_dtheta = delta.squaredNorm() / tau;
  out.vartheta_minus_theta = tau * (a / 3.0 + b / 2.0 + c - 0.5 * (left + right));
  return out;
}

std::vector<double> state_residuals(const NeuralField& field, const StateTrajectory& state,
                                    const ControlPath& theta, SupSampling sampling) {
  check_consistent(state, theta);
  const TimeGrid& grid = theta.grid;
  const int intervals = grid.intervals();
  const std::vector<double> s = sample_points(sampling);
  std::vector<double> out(static_cast<std::size_t>(intervals));
  for (int k = 1; k <= intervals; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double tau = grid.step(k);
    double sup = 0.0;
    for (double sj : s) {
      sup = std::max(sup, field.eval(state.values[i - 1], interpolate(theta, k, sj)).norm());
    }
    double r = tau * sup + jump_weight(tau, grid.step(k + 1)) * (state.values[i] - state.values[i - 1]).norm();
    if (k >= 2 && k <= intervals - 1) {
      r += jump_weight(tau, grid.step(k - 1)) * (state.values[i - 1] - state.values[i - 2]).norm();
    }
    out[i - 1] = r;
  }
  return out;
}

std::vector<double> adjoint_residuals(const NeuralField& field, const StateTrajectory& state,
                                      const ControlPath& theta, const AdjointTrajectory& adjoint,
                                      SupSampling sampling) {
  check_consistent(state, theta);
  require_same_grid(adjoint.grid, theta.grid, "adjoint_residuals");
  const TimeGrid& grid = theta.grid;
  const int intervals = grid.intervals();
  const std::vector<double> s = sample_points(sampling);
  std::vector<double> out(static_cast<std::size_t>(intervals));
  for (int k = 1; k <= intervals; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double tau = grid.step(k);
    double sup = 0.0;
    for (double sj : s) {
      sup = std::max(
          sup, field.vjp_state(state.values[i - 1], interpolate(theta, k, sj), adjoint.values[i]).norm());
    }
    double r = tau * sup + jump_weight(tau, grid.step(k - 1)) * (adjoint.values[i] - adjoint.values[i - 1]).norm();
    if (k <= intervals - 1) {
      r += jump_weight(tau, grid.step(k + 1)) * (adjoint.values[i + 1] - adjoint.values[i]).norm();
    }
    out[i - 1] = r;
  }
  return out;
}

ResidualWeights weights(const StateTrajectory& state, const AdjointTrajectory& adjoint) {
  require_same_grid(state.grid, adjoint.grid, "weights");
  ResidualWeights out;
  for (std::size_t k = 1; k < state.values.size(); ++k) {
    out.state.push_back((state.values[k] - state.values[k - 1]).norm());
    out.adjoint.push_back((adjoint.values[k] - adjoint.values[k - 1]).norm());
  }
  return out;
}

std::vector<double> control_residuals(const NeuralField& field, const StateTrajectory& state,
                                      const ControlPath& theta, const AdjointTrajectory& adjoint,
                                      double lambda) {
  check_consistent(state, theta);
  require_same_grid(adjoint.grid, theta.grid, "control_residuals");
  const QuadraticReconstruction q = reconstruct_quadratic(theta);
  const int intervals = theta.grid.intervals();
  std::vector<double> out(static_cast<std::size_t>(intervals));
  for (int k = 1; k <= intervals; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const ControlIntegrals integrals = control_integrals(theta, q, k);
    const ThetaVec sensitivity =
        field.vjp_params(state.values[i - 1], theta.midpoint(k), adjoint.values[i]);
    const double value_term = integrals.theta_vartheta - integrals.theta_theta;
    const double derivative_term = integrals.dtheta_dvartheta - integrals.dtheta_dtheta;
    out[i - 1] = lambda * (value_term + derivative_term) +
                 sensitivity.dot(integrals.vartheta_minus_theta);
  }
  return out;
}

int argmax_interval(const std::vector<double>& eta) {
  if (eta.empty()) throw InvalidArgument("argmax_interval: no intervals");
  std::size_t best = 0;
  for (std::size_t k = 1; k < eta.size(); ++k) {
    if (eta[k] > eta[best]) best = k;
  }
  return static_cast<int>(best) + 1;
}

IndicatorReport indicate(const NeuralField& field, const StateTrajectory& state,
                         const ControlPath& theta, const AdjointTrajectory& adjoint, double lambda,
                         SupSampling sampling) {
  const std::vector<double> r_x = state_residuals(field, state, theta, sampling);
  const std::vector<double> r_p = adjoint_residuals(field, state, theta, adjoint, sampling);
  const ResidualWeights w = weights(state, adjoint);
  const std::vector<double> rho = control_residuals(field, state, theta, adjoint, lambda);

  IndicatorReport report{theta.grid, {}, 0.0, 1};
  std::vector<double> eta(r_x.size());
  for (std::size_t i = 0; i < r_x.size(); ++i) {
    IntervalIndicator entry;
    entry.state_residual = r_x[i];
    entry.adjoint_residual = r_p[i];
    entry.state_weight = w.state[i];
    entry.adjoint_weight = w.adjoint[i];
    entry.control_residual = rho[i];
    entry.eta = r_p[i] * w.state[i] + std::abs(rho[i]) + r_x[i] * w.adjoint[i];
    eta[i] = entry.eta;
    report.estimate += 0.5 * entry.eta;
    report.intervals.push_back(entry);
  }
  report.argmax = argmax_interval(eta);
  return report;
}

void write_indicator_csv(std::ostream& out, const IndicatorReport& report) {
  const auto precision = out.precision(17);
  out << "k,t_left,t_right,R_x,R_p,omega_x,omega_p,rho,eta\n";
  for (std::size_t i = 0; i < report.intervals.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const IntervalIndicator& e = report.intervals[i];
    out << k << ',' << report.grid.node(k - 1) << ',' << report.grid.node(k) << ','
        << e.state_residual << ',' << e.adjoint_residual << ',' << e.state_weight << ','
        << e.adjoint_weight << ',' << e.control_residual << ',' << e.eta << '\n';
  }
  out.precision(precision);
}

}  // namespace nodeadapt
