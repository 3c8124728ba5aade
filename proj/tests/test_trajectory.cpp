#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nodeadapt/errors.hpp"
#include "nodeadapt/gradcheck.hpp"
#include "nodeadapt/oracles.hpp"
#include "nodeadapt/trajectory.hpp"

using namespace nodeadapt;

namespace {

ControlPath constant_path(const TimeGrid& grid, const ThetaVec& theta) {
  return {grid, NodalParams(static_cast<std::size_t>(grid.node_count()), theta)};
}

}  // namespace

TEST_CASE("zero field keeps the state at the input") {
  const NeuralField field(2);
  const ControlPath theta = constant_path(TimeGrid({0.0, 0.3, 1.0, 2.5}), ThetaVec::Zero(6));
  SeededRng rng(1);
  const BatchState x_in = gaussian_matrix(rng, 2, 3, 1.0);
  const StateTrajectory x = solve_state(field, theta, x_in);
  REQUIRE(x.values.size() == 4);
  for (const BatchState& v : x.values) CHECK(v == x_in);
}

TEST_CASE("one forward step by hand: x1 = 20 tanh(1)") {
  const NeuralField field(1);
  const ControlPath theta = constant_path(TimeGrid::uniform(1, 20.0), ThetaVec{{0.0, 1.0}});
  const StateTrajectory x = solve_state(field, theta, BatchState::Zero(1, 1));
  CHECK(x.values[1](0, 0) == doctest::Approx(20.0 * std::tanh(1.0)).epsilon(1e-15));
}

TEST_CASE("forward step uses the interval midpoint control") {
  const NeuralField field(1);
  // theta^0 = (0, 0), theta^1 = (0, 2): midpoint bias 1.
  const ControlPath theta(TimeGrid::uniform(1, 1.0), {ThetaVec{{0.0, 0.0}}, ThetaVec{{0.0, 2.0}}});
  const StateTrajectory x = solve_state(field, theta, BatchState::Zero(1, 1));
  CHECK(x.values[1](0, 0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
}

TEST_CASE("blow-up is reported as a non-finite state") {
  const NeuralField field(1);
  const ControlPath theta = constant_path(TimeGrid::uniform(2, 1.0), ThetaVec{{1.0, 0.0}});
  BatchState x_in(1, 1);
  x_in(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_state(field, theta, x_in), NonFiniteError);
}

TEST_CASE("zero weights keep the adjoint at the terminal gradient") {
  const NeuralField field(2);
  const ControlPath theta = constant_path(TimeGrid({0.0, 0.5, 2.0}), pack_theta(DenseMatrix::Zero(2, 2), Vector::Ones(2)));
  SeededRng rng(2);
  const BatchState x_in = gaussian_matrix(rng, 2, 3, 1.0);
  const StateTrajectory x = solve_state(field, theta, x_in);
  const BatchState g = gaussian_matrix(rng, 2, 3, 1.0);
  const AdjointTrajectory p = solve_adjoint(field, theta, x, g);
  for (const BatchState& v : p.values) CHECK(v == g);
}

TEST_CASE("one adjoint step by hand: p0 = 2") {
  const NeuralField field(1);
  const ControlPath theta = constant_path(TimeGrid::uniform(1, 1.0), ThetaVec{{1.0, 0.0}});
  const StateTrajectory x = solve_state(field, theta, BatchState::Zero(1, 1));
  const AdjointTrajectory p = solve_adjoint(field, theta, x, BatchState::Ones(1, 1));
  CHECK(p.values[0](0, 0) == 2.0);
  CHECK(p.values[1](0, 0) == 1.0);
}

TEST_CASE("adjoint rejects a state from another grid") {
  const NeuralField field(1);
  const ControlPath a = constant_path(TimeGrid::uniform(2, 1.0), ThetaVec{{1.0, 0.0}});
  const ControlPath b = constant_path(TimeGrid::uniform(3, 1.0), ThetaVec{{1.0, 0.0}});
  const StateTrajectory x = solve_state(field, b, BatchState::Zero(1, 1));
  CHECK_THROWS_AS(solve_adjoint(field, a, x, BatchState::Ones(1, 1)), GridMismatchError);
  const StateTrajectory xa = solve_state(field, a, BatchState::Zero(1, 1));
  CHECK_THROWS_AS(solve_adjoint(field, a, xa, BatchState::Ones(1, 2)), DimensionError);
}

TEST_CASE("property: nodal chain-rule gradient equals finite differences on random instances") {
  SeededRng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    InstanceSpec shape;
    shape.width = 2 + static_cast<int>(rng.uniform_index(3));
    shape.samples = 1 + static_cast<int>(rng.uniform_index(5));
    shape.intervals = 1 + static_cast<int>(rng.uniform_index(7));
    shape.head = trial % 2 == 0 ? HeadKind::BinarySigmoid : HeadKind::MulticlassSoftmax;
    const RandomInstance inst = make_random_instance(shape, rng);
    const ForwardPass pass = forward(inst.problem, inst.theta);
    const AdjointTrajectory p = backward(inst.problem, inst.theta, pass.state);
    const Vector analytic = oracle::flatten(nodal_chain_rule_gradient(inst.problem.field, inst.theta, pass.state, p));
    const std::size_t nodes = inst.theta.values.size();
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& flat) {
          return data_loss(inst.problem, ControlPath(inst.theta.grid, oracle::unflatten(flat, nodes)));
        },
        oracle::flatten(inst.theta.values));
    CHECK(componentwise_relative_error(analytic, fd) < 1e-5);
  }
}

TEST_CASE("control path evaluation") {
  const ControlPath theta(TimeGrid({0.0, 1.0, 3.0}), {ThetaVec{{0.0}}, ThetaVec{{2.0}}, ThetaVec{{-2.0}}});
  CHECK(theta.at(0.0)(0) == 0.0);
  CHECK(theta.at(1.0)(0) == 2.0);
  CHECK(theta.at(3.0)(0) == -2.0);
  CHECK(theta.at(0.25)(0) == doctest::Approx(0.5));
  CHECK(theta.at(2.0)(0) == doctest::Approx(0.0));
  CHECK(theta.midpoint(2)(0) == 0.0);
  const ControlPath refined = theta.insert_midpoint(2);
  CHECK(refined.grid.nodes() == std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK(refined.values[2](0) == 0.0);
  CHECK_THROWS_AS(ControlPath(TimeGrid::uniform(2, 1.0), {ThetaVec{{0.0}}}), DimensionError);
}

TEST_CASE("trajectory CSV rows: time then values") {
  const TimeGrid grid({0.0, 0.5});
  std::vector<BatchState> values{BatchState::Constant(1, 2, 1.0), BatchState::Constant(1, 2, 2.5)};
  std::ostringstream out;
  write_trajectory_csv(out, grid, values);
  CHECK(out.str() == "0,1,1\n0.5,2.5,2.5\n");
}
