#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nodeadapt/errors.hpp"
#include "nodeadapt/oracles.hpp"
#include "nodeadapt/trajectory.hpp"

using namespace nodeadapt;

TEST_CASE("composite midpoint quadrature") {
  CHECK(oracle::composite_quadrature([](double) { return 2.0; }, 1.0, 4.0, 3) == 6.0);
  CHECK(oracle::composite_quadrature([](double t) { return 3.0 * t - 1.0; }, 0.0, 2.0, 7) ==
        doctest::Approx(4.0).epsilon(1e-15));
  // Midpoint error on t^2 over [0,1] is exactly -1/(12 n^2).
  const double q = oracle::composite_quadrature([](double t) { return t * t; }, 0.0, 1.0, 10);
  CHECK(q == doctest::Approx(1.0 / 3.0 - 1.0 / 1200.0).epsilon(1e-14));
  const double s = oracle::composite_quadrature([](double t) { return std::sin(t); }, 0.0, std::numbers::pi, 1000);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("central differences are exact on quadratics") {
  const oracle::ScalarFunction f = [](const Vector& v) { return 0.5 * v.squaredNorm() + 3.0 * v(0) * v(1) - v(2); };
  const Vector x{{0.3, -1.2, 2.0}};
  const Vector g = oracle::fd_gradient(f, x);
  const Vector exact{{0.3 + 3.0 * -1.2, -1.2 + 3.0 * 0.3, 2.0 - 1.0}};
  CHECK((g - exact).cwiseAbs().maxCoeff() < 1e-9);
  const Vector dir{{1.0, 1.0, 0.0}};
  CHECK(oracle::fd_directional(f, x, dir) == doctest::Approx(exact(0) + exact(1)).epsilon(1e-9));
  const oracle::ScalarFunction lin = [](const Vector& v) { return 4.0 * v(0) - 2.0 * v(1); };
  CHECK(oracle::fd_directional(lin, x, dir, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("dense solve with pivoting") {
  DenseMatrix a(2, 2);
  a << 0.0, 1.0, 2.0, 3.0;  // needs a row swap
  const Vector x = oracle::dense_solve(a, Vector{{1.0, 8.0}});
  CHECK(x(0) == doctest::Approx(2.5));
  CHECK(x(1) == doctest::Approx(1.0));
  DenseMatrix singular(2, 2);
  singular << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(oracle::dense_solve(singular, Vector{{1.0, 1.0}}), SingularPivotError);
  SeededRng rng(3);
  const DenseMatrix m = gaussian_matrix(rng, 12, 12, 1.0) + 12.0 * DenseMatrix::Identity(12, 12);
  const Vector b = gaussian_matrix(rng, 12, 1, 1.0).col(0);
  CHECK((m * oracle::dense_solve(m, b) - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fine reference with factor one equals forward Euler") {
  SeededRng rng(4);
  const TimeGrid g({0.0, 0.2, 0.7, 1.0});
  NodalParams v;
  for (int k = 0; k < 4; ++k) v.push_back(gaussian_matrix(rng, 12, 1, 0.5).col(0));
  const ControlPath theta(g, v);
  const BatchState x0 = gaussian_matrix(rng, 3, 5, 1.0);
  const StateTrajectory euler = solve_state(NeuralField(3), theta, x0);
  CHECK((oracle::fine_reference_solve(theta, x0, 1) - euler.values.back()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fine reference with a vanishing field returns the input") {
  const TimeGrid g = TimeGrid::uniform(3, 2.0);
  const ControlPath theta(g, NodalParams(4, ThetaVec::Zero(6)));
  const BatchState x0 = BatchState::Constant(2, 3, -0.4);
  CHECK(oracle::fine_reference_solve(theta, x0, 64) == x0);
}

TEST_CASE("fine reference converges at first order (Richardson ratio near 2)") {
  SeededRng rng(5);
  const TimeGrid g = TimeGrid::uniform(2, 1.0);
  NodalParams v;
  for (int k = 0; k < 3; ++k) v.push_back(gaussian_matrix(rng, 6, 1, 1.0).col(0));
  const ControlPath theta(g, v);
  const BatchState x0 = gaussian_matrix(rng, 2, 3, 1.0);
  const BatchState a = oracle::fine_reference_solve(theta, x0, 64);
  const BatchState b = oracle::fine_reference_solve(theta, x0, 128);
  const BatchState c = oracle::fine_reference_solve(theta, x0, 256);
  const double ratio = (a - b).norm() / (b - c).norm();
  CHECK(ratio > 1.9);
  CHECK(ratio < 2.1);
}

TEST_CASE("flatten and unflatten are inverse") {
  const NodalParams v{ThetaVec{{1.0, 2.0}}, ThetaVec{{3.0, 4.0}}};
  const Vector flat = oracle::flatten(v);
  CHECK(flat == Vector{{1.0, 2.0, 3.0, 4.0}});
  CHECK(oracle::unflatten(flat, 2) == v);
}
