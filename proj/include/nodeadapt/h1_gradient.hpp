#pragma once

#include <vector>

#include "nodeadapt/linalg.hpp"
#include "nodeadapt/trajectory.hpp"

namespace nodeadapt {

/// Stiffness, mass and H1 system matrices of the nodal hat basis on a grid,
/// both boundary nodes included.
struct FemMatrices {
  TridiagonalMatrix stiffness;
  TridiagonalMatrix mass;
  TridiagonalMatrix system;  // stiffness + mass
};

FemMatrices assemble_fem(const TimeGrid& grid);

/// Nodal values of the continuous piecewise-linear interpolant of the adjoint
/// through the interval midpoints. Interior nodes use
///   phat^k = tau_{k+1}/(tau_k+tau_{k+1}) p^k + tau_k/(tau_k+tau_{k+1}) p^{k+1};
/// the interpolant is held constant outside [m_1, m_K], so phat^0 = p^1 and
/// phat^K = p^K.
std::vector<BatchState> reconstruct_adjoint_at_nodes(const AdjointTrajectory& adjoint);

/// z^k = D2F(x^{k-1}, theta^k)^* phat^k for k >= 1 and z^0 = D2F(x^0, theta^0)^* phat^0.
NodalParams assemble_z(const NeuralField& field, const StateTrajectory& state,
                       const ControlPath& theta, const std::vector<BatchState>& p_hat);

/// Solves (B (x) I) g = lambda (B (x) I) Theta + (M (x) I) z one parameter
/// component at a time, as g = lambda Theta + B^{-1} M z.
NodalParams solve_gradient(const FemMatrices& fem, const ControlPath& theta, const NodalParams& z,
                           double lambda);

/// a^T (B (x) I) b, the discrete H1 inner product of two nodal fields.
double h1_inner(const FemMatrices& fem, const NodalParams& a, const NodalParams& b);

/// R(theta_tau) = (lambda/2) Theta^T (B (x) I) Theta.
double regularizer(const FemMatrices& fem, const ControlPath& theta, double lambda);

/// Packs nodal vectors into a (K+1) x n matrix, one row per node.
DenseMatrix stack_nodes(const NodalParams& values);
NodalParams unstack_nodes(const DenseMatrix& rows);

}  // namespace nodeadapt
