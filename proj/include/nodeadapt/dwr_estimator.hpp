#pragma once

#include <iosfwd>
#include <vector>

#include "nodeadapt/trajectory.hpp"

namespace nodeadapt {

/// Continuous piecewise-quadratic reconstruction of a piecewise-linear control.
///
/// On interval k, with s = (t - t_{k-1}) / tau_k in [0, 1]:
///   vartheta(t) = A_k s^2 + B_k s + C_k,
/// interpolating theta^{k-1} and theta^k with left slope S_{k-1}, where S_0 = 0
/// and S_k = (theta^k - theta^{k-1}) / tau_k.
struct QuadraticReconstruction {
  std::vector<ThetaVec> a;  // index k-1 holds A_k
  std::vector<ThetaVec> b;
  std::vector<ThetaVec> c;

  ThetaVec eval(int k, double s) const;
  ThetaVec derivative(int k, double s, double tau) const;
};

QuadraticReconstruction reconstruct_quadratic(const ControlPath& theta);

/// Closed-form integrals entering rho^k on one interval.
struct ControlIntegrals {
  double theta_vartheta = 0.0;        // int (theta, vartheta)
  double theta_theta = 0.0;           // int (theta, theta)
  double dtheta_dvartheta = 0.0;      // int (theta', vartheta')
  double dtheta_dtheta = 0.0;         // int (theta', theta')
  ThetaVec vartheta_minus_theta;      // int (vartheta - theta) dt
};

ControlIntegrals control_integrals(const ControlPath& theta, const QuadraticReconstruction& q,
                                   int k);

struct IntervalIndicator {
  double state_residual = 0.0;    // R_x
  double adjoint_residual = 0.0;  // R_p
  double state_weight = 0.0;      // omega_x
  double adjoint_weight = 0.0;    // omega_p
  double control_residual = 0.0;  // rho, signed
  double eta = 0.0;
};

struct IndicatorReport {
  TimeGrid grid;
  std::vector<IntervalIndicator> intervals;  // index k-1 for interval k
  double estimate = 0.0;                      // (1/2) sum eta_k
  int argmax = 1;                             // 1-based, lowest index on ties
};

/// Sample points s_j = j / (samples - 1), j = 0..samples-1, used to replace
/// the interval supremum by a maximum.
struct SupSampling {
  int samples = 5;
};

std::vector<double> state_residuals(const NeuralField& field, const StateTrajectory& state,
                                    const ControlPath& theta, SupSampling sampling = {});

std::vector<double> adjoint_residuals(const NeuralField& field, const StateTrajectory& state,
                                      const ControlPath& theta, const AdjointTrajectory& adjoint,
                                      SupSampling sampling = {});

struct ResidualWeights {
  std::vector<double> state;    // omega_x^k = |x^k - x^{k-1}|
  std::vector<double> adjoint;  // omega_p^k = |p^k - p^{k-1}|
};

ResidualWeights weights(const StateTrajectory& state, const AdjointTrajectory& adjoint);

/// Signed rho^k for every interval. The field term uses
/// D2F(x^{k-1}, theta^{k-1/2})^* p^k, constant on the interval.
std::vector<double> control_residuals(const NeuralField& field, const StateTrajectory& state,
                                      const ControlPath& theta, const AdjointTrajectory& adjoint,
                                      double lambda);

/// eta_k = R_p omega_x + |rho| + R_x omega_p and the refinement target.
IndicatorReport indicate(const NeuralField& field, const StateTrajectory& state,
                         const ControlPath& theta, const AdjointTrajectory& adjoint, double lambda,
                         SupSampling sampling = {});

/// Index (1-based) of the largest value; ties go to the lowest index.
int argmax_interval(const std::vector<double>& eta);

/// Columns: k,t_left,t_right,R_x,R_p,omega_x,omega_p,rho,eta
void write_indicator_csv(std::ostream& out, const IndicatorReport& report);

}  // namespace nodeadapt
