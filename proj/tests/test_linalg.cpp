#include <doctest.h>

#include <cmath>

#include "nodeadapt/errors.hpp"
#include "nodeadapt/linalg.hpp"
#include "nodeadapt/oracles.hpp"

using namespace nodeadapt;

namespace {

TridiagonalMatrix random_spd(std::size_t n, SeededRng& rng) {
  TridiagonalMatrix a(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a.lower[i] = a.upper[i] = rng.uniform() - 0.5;
  }
  for (std::size_t i = 0; i < n; ++i) a.main[i] = 1.5 + rng.uniform();
  return a;
}

}  // namespace

TEST_CASE("tridiagonal solve: identity returns the right-hand side") {
  const TridiagonalMatrix eye({0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 0.0});
  const Vector x = solve_tridiagonal(eye, Vector{{1.0, 2.0, 3.0}});
  CHECK(x(0) == 1.0);
  CHECK(x(1) == 2.0);
  CHECK(x(2) == 3.0);
}

TEST_CASE("tridiagonal solve: symmetric 2x2 by hand") {
  const TridiagonalMatrix a({1.0}, {2.0, 2.0}, {1.0});
  const Vector x = solve_tridiagonal(a, Vector{{3.0, 3.0}});
  CHECK(x(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x(1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tridiagonal solve agrees with dense elimination on K=32") {
  SeededRng rng(11);
  const TridiagonalMatrix a = random_spd(33, rng);
  Vector rhs(33);
  for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs(i) = rng.normal();
  const Vector thomas = solve_tridiagonal(a, rhs);
  const Vector dense = oracle::dense_solve(a.to_dense(), rhs);
  CHECK((thomas - dense).cwiseAbs().maxCoeff() <= 1e-12 * dense.cwiseAbs().maxCoeff());
}

TEST_CASE("solve followed by multiply is the identity (random well-conditioned systems)") {
  SeededRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(40);
    const TridiagonalMatrix a = random_spd(n, rng);
    Vector rhs(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs(i) = rng.normal();
    const Vector residual = a.multiply(solve_tridiagonal(a, rhs)) - rhs;
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-10 * rhs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("matrix right-hand sides are solved column by column") {
  SeededRng rng(3);
  const TridiagonalMatrix a = random_spd(9, rng);
  const DenseMatrix rhs = gaussian_matrix(rng, 9, 4, 1.0);
  const DenseMatrix x = solve_tridiagonal(a, rhs);
  for (Eigen::Index c = 0; c < 4; ++c) {
    const Vector col = solve_tridiagonal(a, Vector(rhs.col(c)));
    CHECK((x.col(c) - col).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("tridiagonal solve rejects zero pivots and bad shapes") {
  const TridiagonalMatrix singular({1.0}, {0.0, 1.0}, {1.0});
  CHECK_THROWS_AS(solve_tridiagonal(singular, Vector{{1.0, 1.0}}), SingularPivotError);
  const TridiagonalMatrix later({1.0}, {1.0, 1.0}, {1.0});  // second pivot 1 - 1 = 0
  CHECK_THROWS_AS(solve_tridiagonal(later, Vector{{1.0, 1.0}}), SingularPivotError);
  const TridiagonalMatrix ok({0.0}, {1.0, 1.0}, {0.0});
  CHECK_THROWS_AS(solve_tridiagonal(ok, Vector{{1.0, 1.0, 1.0}}), DimensionError);
  CHECK_THROWS_AS(TridiagonalMatrix({1.0, 1.0}, {1.0, 1.0}, {1.0}), DimensionError);
}

TEST_CASE("tridiagonal multiply matches the dense form") {
  SeededRng rng(8);
  const TridiagonalMatrix a = random_spd(7, rng);
  const Vector v = gaussian_matrix(rng, 7, 1, 1.0).col(0);
  CHECK((a.multiply(v) - a.to_dense() * v).cwiseAbs().maxCoeff() < 1e-14);
  const TridiagonalMatrix twice = a + a;
  CHECK((twice.to_dense() - 2.0 * a.to_dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian_matrix: tiny scale gives tiny entries") {
  SeededRng rng(1);
  const DenseMatrix m = gaussian_matrix(rng, 6, 6, 1e-300);
  CHECK(m.cwiseAbs().maxCoeff() < 1e-290);
}

TEST_CASE("gaussian_matrix: same seed gives bitwise identical matrices") {
  SeededRng a(7);
  SeededRng b(7);
  const DenseMatrix ma = gaussian_matrix(a, 5, 3, 0.7);
  const DenseMatrix mb = gaussian_matrix(b, 5, 3, 0.7);
  CHECK(ma == mb);
  SeededRng c(8);
  CHECK(gaussian_matrix(c, 5, 3, 0.7) != ma);
}

TEST_CASE("gaussian_matrix: sample standard deviation of 1e5 draws") {
  SeededRng rng(2024);
  const DenseMatrix m = gaussian_matrix(rng, 1, 100000, 1.0);
  const double mean = m.mean();
  const double var = (m.array() - mean).square().sum() / static_cast<double>(m.size() - 1);
  CHECK(std::sqrt(var) >= 0.99);
  CHECK(std::sqrt(var) <= 1.01);
  CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("gaussian_matrix rejects non-positive scale") {
  SeededRng rng(1);
  CHECK_THROWS_AS(gaussian_matrix(rng, 2, 2, 0.0), InvalidArgument);
  CHECK_THROWS_AS(gaussian_matrix(rng, 2, 2, -1.0), InvalidArgument);
}

TEST_CASE("SeededRng state survives a serialize/restore round trip") {
  SeededRng rng(99);
  for (int i = 0; i < 17; ++i) rng.normal();
  const std::string state = rng.serialize();
  const double next = rng.uniform();
  SeededRng other(0);
  other.restore(state);
  CHECK(other.uniform() == next);
  CHECK(other.seed() == 99);
  CHECK_THROWS_AS(other.restore("not a state"), InvalidArgument);
}

TEST_CASE("uniform_index stays in range and covers it") {
  SeededRng rng(4);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t k = rng.uniform_index(5);
    REQUIRE(k < 5);
    ++hits[k];
  }
  for (int h : hits) CHECK(h > 800);
  CHECK_THROWS_AS(rng.uniform_index(0), InvalidArgument);
}

TEST_CASE("uniform draws lie in [0, 1)") {
  SeededRng rng(6);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}
