#pragma once

#include <functional>

#include "nodeadapt/linalg.hpp"
#include "nodeadapt/trajectory.hpp"

// Brute-force reference computations. None of these call into the code they
// are used to check: dense elimination instead of the Thomas sweep, midpoint
// quadrature instead of closed forms, plain loops instead of NeuralField.

namespace nodeadapt::oracle {

using ScalarFunction = std::function<double(const Vector&)>;

inline constexpr double kFdStep = 1e-5;

/// (f(v + eps d) - f(v - eps d)) / (2 eps)
double fd_directional(const ScalarFunction& f, const Vector& v, const Vector& direction,
                      double eps = kFdStep);

/// Central differences along every coordinate axis.
Vector fd_gradient(const ScalarFunction& f, const Vector& v, double eps = kFdStep);

/// Gaussian elimination with partial pivoting.
Vector dense_solve(DenseMatrix a, Vector rhs);

/// Composite midpoint rule with n panels on [a, b].
double composite_quadrature(const std::function<double(double)>& g, double a, double b, int n);

/// Forward Euler for x' = tanh(W(t) x + b(t)) with every interval split into
/// `factor` equal sub-steps; the control is evaluated at sub-step midpoints by
/// linear interpolation between the nodal values.
BatchState fine_reference_solve(const ControlPath& theta, const BatchState& x_in, int factor);

/// Flat view of nodal controls (node-major) and back.
Vector flatten(const NodalParams& values);
NodalParams unflatten(const Vector& flat, std::size_t nodes);

}  // namespace nodeadapt::oracle
