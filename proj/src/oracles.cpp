#include "nodeadapt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nodeadapt/errors.hpp"

namespace nodeadapt::oracle {

double fd_directional(const ScalarFunction& f, const Vector& v, const Vector& direction, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("fd_directional: eps must be positive");
  if (direction.size() != v.size()) throw DimensionError("fd_directional: direction length");
  const Vector plus = v + eps * direction;
  const Vector minus = v - eps * direction;
  return (f(plus) - f(minus)) / (2.0 * eps);
}

Vector fd_gradient(const ScalarFunction& f, const Vector& v, double eps) {
  Vector out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    Vector e = Vector::Zero(v.size());
    e(j) = 1.0;
    out(j) = fd_directional(f, v, e, eps);
  }
  return out;
}

Vector dense_solve(DenseMatrix a, Vector rhs) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || rhs.size() != n) throw DimensionError("dense_solve: shape mismatch");
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= 1e-14 * scale || scale == 0.0) {
      throw SingularPivotError("dense_solve: matrix is singular to working precision");
    }
    if (pivot != col) {
      for (Eigen::Index j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(rhs(col), rhs(pivot));
    }
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      for (Eigen::Index j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
      rhs(r) -= factor * rhs(col);
    }
  }
  Vector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double acc = rhs(i);
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= a(i, j) * x(j);
    x(i) = acc / a(i, i);
  }
  return x;
}

double composite_quadrature(const std::function<double(double)>& g, double a, double b, int n) {
  if (n < 1) throw InvalidArgument("composite_quadrature: need at least one panel");
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += g(a + (i + 0.5) * h);
  return sum * h;
}

BatchState fine_reference_solve(const ControlPath& theta, const BatchState& x_in, int factor) {
  if (factor < 1) throw InvalidArgument("fine_reference_solve: factor must be >= 1");
  const Eigen::Index d = x_in.rows();
  const Eigen::Index m = x_in.cols();
  if (theta.param_count() != d * d + d) throw DimensionError("fine_reference_solve: width mismatch");
  const TimeGrid& grid = theta.grid;
  BatchState x = x_in;
  BatchState next(d, m);
  Vector th(theta.param_count());
  for (int k = 1; k <= grid.intervals(); ++k) {
    const double tau = grid.step(k);
    const double h = tau / factor;
    const auto& left = theta.values[static_cast<std::size_t>(k - 1)];
    const auto& right = theta.values[static_cast<std::size_t>(k)];
    for (int j = 0; j < factor; ++j) {
      // Average of the interpolated endpoints of the sub-step.
      const double s0 = static_cast<double>(j) / factor;
      const double s1 = static_cast<double>(j + 1) / factor;
      for (Eigen::Index q = 0; q < th.size(); ++q) {
        const double a = (1.0 - s0) * left(q) + s0 * right(q);
        const double b = (1.0 - s1) * left(q) + s1 * right(q);
        th(q) = 0.5 * (a + b);
      }
      for (Eigen::Index col = 0; col < m; ++col) {
        for (Eigen::Index r = 0; r < d; ++r) {
          double pre = th(d * d + r);
          for (Eigen::Index c = 0; c < d; ++c) pre += th(c * d + r) * x(c, col);  // W column-stacked
          next(r, col) = x(r, col) + h * std::tanh(pre);
        }
      }
      std::swap(x, next);
      if (!x.allFinite()) throw NonFiniteError("fine_reference_solve: state blew up");
    }
  }
  return x;
}

Vector flatten(const NodalParams& values) {
  if (values.empty()) return {};
  const Eigen::Index n = values.front().size();
  Vector out(static_cast<Eigen::Index>(values.size()) * n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.segment(static_cast<Eigen::Index>(k) * n, n) = values[k];
  }
  return out;
}

NodalParams unflatten(const Vector& flat, std::size_t nodes) {
  if (nodes == 0 || flat.size() % static_cast<Eigen::Index>(nodes) != 0) {
    throw DimensionError("unflatten: length is not a multiple of the node count");
  }
  const Eigen::Index n = flat.size() / static_cast<Eigen::Index>(nodes);
  NodalParams out(nodes);
  for (std::size_t k = 0; k < nodes; ++k) out[k] = flat.segment(static_cast<Eigen::Index>(k) * n, n);
  return out;
}

}  // namespace nodeadapt::oracle
