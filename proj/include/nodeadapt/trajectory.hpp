#pragma once

#include <iosfwd>
#include <vector>

#include "nodeadapt/neural_field.hpp"
#include "nodeadapt/time_grid.hpp"

namespace nodeadapt {

/// Nodal parameter vectors, one per grid node.
using NodalParams = std::vector<ThetaVec>;

/// Piecewise-linear control path theta_tau(t) given by its nodal values.
struct ControlPath {
  TimeGrid grid;
  NodalParams values;

  ControlPath(TimeGrid grid, NodalParams values);

  /// theta_tau(t), linear interpolation between nodes.
  ThetaVec at(double t) const;
  /// theta^{k-1/2} = (theta^{k-1} + theta^k) / 2 for interval k.
  ThetaVec midpoint(int k) const;
  Eigen::Index param_count() const { return values.front().size(); }

  /// Copy with a new node in the middle of interval k carrying the mean of
  /// its neighbours.
  ControlPath insert_midpoint(int k) const;
};

/// State x^0..x^K; x_tau(t) = x^{k-1} on [t_{k-1}, t_k).
struct StateTrajectory {
  TimeGrid grid;
  std::vector<BatchState> values;
};

/// Adjoint p^0..p^K; p_tau(t) = p^k on (t_{k-1}, t_k].
struct AdjointTrajectory {
  TimeGrid grid;
  std::vector<BatchState> values;
};

/// Forward Euler: x^k = x^{k-1} + tau_k F(x^{k-1}, theta^{k-1/2}).
/// Throws NonFiniteError on blow-up.
StateTrajectory solve_state(const NeuralField& field, const ControlPath& theta,
                            const BatchState& x_in);

/// Backward marching for k = K..1:
/// p^{k-1} = p^k + tau_k D1F(x^{k-1}, theta^{k-1/2})^* p^k, p^K = terminal_grad.
AdjointTrajectory solve_adjoint(const NeuralField& field, const ControlPath& theta,
                                const StateTrajectory& state, const BatchState& terminal_grad);

/// Exact derivative of l(x^K) with respect to every nodal theta^j, by the chain
/// rule through the midpoint evaluation: sum_k tau_k w_{j,k} D2F(x^{k-1},
/// theta^{k-1/2})^* p^k with w_{j,k} = (delta_{j,k-1} + delta_{j,k}) / 2.
NodalParams nodal_chain_rule_gradient(const NeuralField& field, const ControlPath& theta,
                                      const StateTrajectory& state,
                                      const AdjointTrajectory& adjoint);

/// One row per node: node time followed by the m*d values.
void write_trajectory_csv(std::ostream& out, const TimeGrid& grid,
                          const std::vector<BatchState>& values);

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what);

}  // namespace nodeadapt
