#include "nodeadapt/objective.hpp"

namespace nodeadapt {

ForwardPass forward(const Problem& problem, const ControlPath& theta) {
  ForwardPass out{solve_state(problem.field, theta, problem.x_in), 0.0};
  out.loss = problem.head.loss(out.state.values.back());
  return out;
}

double data_loss(const Problem& problem, const ControlPath& theta) { return forward(problem, theta).loss; }

double full_objective(const Problem& problem, const ControlPath& theta) {
  return data_loss(problem, theta) + regularizer(assemble_fem(theta.grid), theta, problem.lambda);
}

AdjointTrajectory backward(const Problem& problem, const ControlPath& theta,
                           const StateTrajectory& state) {
  return solve_adjoint(problem.field, theta, state,
                       problem.head.terminal_gradient(state.values.back()));
}

GradientBundle compute_gradient(const Problem& problem, const ControlPath& theta) {
  ForwardPass pass = forward(problem, theta);
  AdjointTrajectory adjoint = backward(problem, theta, pass.state);
  FemMatrices fem = assemble_fem(theta.grid);
  NodalParams z = assemble_z(problem.field, pass.state, theta, reconstruct_adjoint_at_nodes(adjoint));
  NodalParams gradient = solve_gradient(fem, theta, z, problem.lambda);
  const double reg = regularizer(fem, theta, problem.lambda);
  return {std::move(pass.state), std::move(adjoint), std::move(fem), std::move(z),
          std::move(gradient), pass.loss, reg};
}

}  // namespace nodeadapt
