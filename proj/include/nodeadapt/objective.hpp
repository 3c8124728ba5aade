#pragma once

#include "nodeadapt/h1_gradient.hpp"
#include "nodeadapt/loss_head.hpp"
#include "nodeadapt/trajectory.hpp"

namespace nodeadapt {

/// Everything the discrete objective depends on besides the controls.
struct Problem {
  NeuralField field;
  TaskHead head;
  BatchState x_in;  // W_in applied to the raw inputs
  double lambda = 0.0;
};

struct ForwardPass {
  StateTrajectory state;
  double loss = 0.0;
};

/// One solve of the discrete optimality system at the current controls.
struct GradientBundle {
  StateTrajectory state;
  AdjointTrajectory adjoint;
  FemMatrices fem;
  NodalParams z;
  NodalParams gradient;  // H1 Riesz gradient
  double loss = 0.0;
  double regularizer = 0.0;
};

ForwardPass forward(const Problem& problem, const ControlPath& theta);

/// Data loss l(x_K) of the forward Euler terminal state.
double data_loss(const Problem& problem, const ControlPath& theta);

/// Data loss plus (lambda/2) Theta^T B Theta.
double full_objective(const Problem& problem, const ControlPath& theta);

GradientBundle compute_gradient(const Problem& problem, const ControlPath& theta);

/// Adjoint trajectory from an existing forward pass.
AdjointTrajectory backward(const Problem& problem, const ControlPath& theta,
                           const StateTrajectory& state);

}  // namespace nodeadapt
