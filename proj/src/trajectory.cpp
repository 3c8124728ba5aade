#include "nodeadapt/trajectory.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!(a == b)) throw GridMismatchError(std::string(what) + ": grids differ");
}

ControlPath::ControlPath(TimeGrid g, NodalParams v) : grid(std::move(g)), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.node_count()) {
    throw DimensionError("ControlPath: one parameter vector per node required");
  }
  for (const auto& theta : values) {
    if (theta.size() != values.front().size()) {
      throw DimensionError("ControlPath: nodal vectors differ in length");
    }
  }
}

ThetaVec ControlPath::at(double t) const {
  const auto& nodes = grid.nodes();
  if (t <= nodes.front()) return values.front();
  if (t >= nodes.back()) return values.back();
  const auto upper = std::upper_bound(nodes.begin(), nodes.end(), t);
  const auto k = static_cast<std::size_t>(upper - nodes.begin());
  const double s = (t - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
  return (1.0 - s) * values[k - 1] + s * values[k];
}

ThetaVec ControlPath::midpoint(int k) const {
  const auto i = static_cast<std::size_t>(k);
  return 0.5 * (values.at(i - 1) + values.at(i));
}

ControlPath ControlPath::insert_midpoint(int k) const {
  TimeGrid new_grid = grid.insert_midpoint(k);
  NodalParams new_values = values;
  new_values.insert(new_values.begin() + k, midpoint(k));
  return {std::move(new_grid), std::move(new_values)};
}

StateTrajectory solve_state(const NeuralField& field, const ControlPath& theta,
                            const BatchState& x_in) {
  const int intervals = theta.grid.intervals();
  StateTrajectory out{theta.grid, {}};
  out.values.reserve(static_cast<std::size_t>(intervals) + 1);
  out.values.push_back(x_in);
  for (int k = 1; k <= intervals; ++k) {
    const BatchState& prev = out.values.back();
    BatchState next = prev + theta.grid.step(k) * field.eval(prev, theta.midpoint(k));
    if (!next.allFinite()) {
      throw NonFiniteError("state blew up at step " + std::to_string(k));
    }
    out.values.push_back(std::move(next));
  }
  return out;
}

AdjointTrajectory solve_adjoint(const NeuralField& field, const ControlPath& theta,
                                const StateTrajectory& state, const BatchState& terminal_grad) {
  require_same_grid(theta.grid, state.grid, "solve_adjoint");
  const int intervals = theta.grid.intervals();
  if (static_cast<int>(state.values.size()) != intervals + 1) {
    throw DimensionError("solve_adjoint: state trajectory has the wrong node count");
  }
  const BatchState& xk = state.values.back();
  if (terminal_grad.rows() != xk.rows() || terminal_grad.cols() != xk.cols()) {
    throw DimensionError("solve_adjoint: terminal gradient shape mismatch");
  }
  AdjointTrajectory out{theta.grid, std::vector<BatchState>(static_cast<std::size_t>(intervals) + 1)};
  out.values.back() = terminal_grad;
  for (int k = intervals; k >= 1; --k) {
    const auto i = static_cast<std::size_t>(k);
    const BatchState& pk = out.values[i];
    out.values[i - 1] =
        pk + theta.grid.step(k) * field.vjp_state(state.values[i - 1], theta.midpoint(k), pk);
    if (!out.values[i - 1].allFinite()) {
      throw NonFiniteError("adjoint blew up at step " + std::to_string(k));
    }
  }
  return out;
}

NodalParams nodal_chain_rule_gradient(const NeuralField& field, const ControlPath& theta,
                                      const StateTrajectory& state,
                                      const AdjointTrajectory& adjoint) {
  require_same_grid(theta.grid, state.grid, "nodal_chain_rule_gradient");
  require_same_grid(theta.grid, adjoint.grid, "nodal_chain_rule_gradient");
  const int intervals = theta.grid.intervals();
  NodalParams grad(static_cast<std::size_t>(intervals) + 1,
                   ThetaVec::Zero(theta.param_count()));
  for (int k = 1; k <= intervals; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const ThetaVec v = field.vjp_params(state.values[i - 1], theta.midpoint(k), adjoint.values[i]);
    const double half_tau = 0.5 * theta.grid.step(k);
    grad[i - 1] += half_tau * v;
    grad[i] += half_tau * v;
  }
  return grad;
}

void write_trajectory_csv(std::ostream& out, const TimeGrid& grid,
                          const std::vector<BatchState>& values) {
  if (static_cast<int>(values.size()) != grid.node_count()) {
    throw DimensionError("write_trajectory_csv: node count mismatch");
  }
  const auto precision = out.precision(17);
  for (int k = 0; k < grid.node_count(); ++k) {
    out << grid.node(k);
    const BatchState& v = values[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << v.data()[i];
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace nodeadapt
