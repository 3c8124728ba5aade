#include "nodeadapt/h1_gradient.hpp"

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

FemMatrices assemble_fem(const TimeGrid& grid) {
  const int intervals = grid.intervals();
  const auto size = static_cast<std::size_t>(intervals) + 1;
  TridiagonalMatrix stiffness(size);
  TridiagonalMatrix mass(size);
  // Element-by-element assembly of the local 2x2 blocks on [t_{k-1}, t_k].
  for (int k = 1; k <= intervals; ++k) {
    const double tau = grid.step(k);
    const auto left = static_cast<std::size_t>(k) - 1;
    stiffness.main[left] += 1.0 / tau;
    stiffness.main[left + 1] += 1.0 / tau;
    stiffness.lower[left] = -1.0 / tau;
    stiffness.upper[left] = -1.0 / tau;
    mass.main[left] += tau / 3.0;
    mass.main[left + 1] += tau / 3.0;
    mass.lower[left] = tau / 6.0;
    mass.upper[left] = tau / 6.0;
  }
  TridiagonalMatrix system = stiffness + mass;
  return {std::move(stiffness), std::move(mass), std::move(system)};
}

std::vector<BatchState> reconstruct_adjoint_at_nodes(const AdjointTrajectory& adjoint) {
  const TimeGrid& grid = adjoint.grid;
  const int intervals = grid.intervals();
  if (static_cast<int>(adjoint.values.size()) != intervals + 1) {
    throw DimensionError("reconstruct_adjoint_at_nodes: node count mismatch");
  }
  std::vector<BatchState> p_hat(adjoint.values.size());
  p_hat.front() = adjoint.values[1];
  p_hat.back() = adjoint.values.back();
  for (int k = 1; k < intervals; ++k) {
    const double left = grid.step(k);
    const double right = grid.step(k + 1);
    const auto i = static_cast<std::size_t>(k);
    p_hat[i] = (right / (left + right)) * adjoint.values[i] +
               (left / (left + right)) * adjoint.values[i + 1];
  }
  return p_hat;
}

NodalParams assemble_z(const NeuralField& field, const StateTrajectory& state,
                       const ControlPath& theta, const std::vector<BatchState>& p_hat) {
  require_same_grid(state.grid, theta.grid, "assemble_z");
  const int nodes = theta.grid.node_count();
  if (static_cast<int>(p_hat.size()) != nodes || static_cast<int>(state.values.size()) != nodes) {
    throw DimensionError("assemble_z: node count mismatch");
  }
  NodalParams z(static_cast<std::size_t>(nodes));
  z[0] = field.vjp_params(state.values[0], theta.values[0], p_hat[0]);
  for (std::size_t k = 1; k < z.size(); ++k) {
    z[k] = field.vjp_params(state.values[k - 1], theta.values[k], p_hat[k]);
  }
  return z;
}

DenseMatrix stack_nodes(const NodalParams& values) {
  if (values.empty()) return {};
  DenseMatrix out(static_cast<Eigen::Index>(values.size()), values.front().size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = values[k].transpose();
  }
  return out;
}

NodalParams unstack_nodes(const DenseMatrix& rows) {
  NodalParams out(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index k = 0; k < rows.rows(); ++k) out[static_cast<std::size_t>(k)] = rows.row(k).transpose();
  return out;
}

NodalParams solve_gradient(const FemMatrices& fem, const ControlPath& theta, const NodalParams& z,
                           double lambda) {
  if (lambda < 0.0) throw InvalidArgument("solve_gradient: lambda must be >= 0");
  if (z.size() != theta.values.size() || fem.system.size() != z.size()) {
    throw DimensionError("solve_gradient: node count mismatch");
  }
  // Columns are the n parameter components; each is an independent solve.
  const DenseMatrix data = solve_tridiagonal(fem.system, fem.mass.multiply(stack_nodes(z)));
  return unstack_nodes(lambda * stack_nodes(theta.values) + data);
}

double h1_inner(const FemMatrices& fem, const NodalParams& a, const NodalParams& b) {
  const DenseMatrix sa = stack_nodes(a);
  const DenseMatrix sb = stack_nodes(b);
  if (sa.rows() != sb.rows() || sa.cols() != sb.cols() ||
      static_cast<std::size_t>(sa.rows()) != fem.system.size()) {
    throw DimensionError("h1_inner: shape mismatch");
  }
  return sa.cwiseProduct(fem.system.multiply(sb)).sum();
}

double regularizer(const FemMatrices& fem, const ControlPath& theta, double lambda) {
  return 0.5 * lambda * h1_inner(fem, theta.values, theta.values);
}

}  // namespace nodeadapt
