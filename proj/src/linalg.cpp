#include "nodeadapt/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

namespace {

constexpr double kPivotThreshold = 1e-14;

void check_shape(const TridiagonalMatrix& a) {
  const std::size_t n = a.main.size();
  if (n == 0) throw DimensionError("tridiagonal matrix is empty");
  if (a.lower.size() != n - 1 || a.upper.size() != n - 1) {
    throw DimensionError("tridiagonal off-diagonals must have length size-1");
  }
}

}  // namespace

TridiagonalMatrix::TridiagonalMatrix(std::size_t size)
    : lower(size > 0 ? size - 1 : 0, 0.0),
      main(size, 0.0),
      upper(size > 0 ? size - 1 : 0, 0.0) {}

TridiagonalMatrix::TridiagonalMatrix(std::vector<double> lower_diag,
                                     std::vector<double> main_diag,
                                     std::vector<double> upper_diag)
    : lower(std::move(lower_diag)), main(std::move(main_diag)), upper(std::move(upper_diag)) {
  check_shape(*this);
}

Vector TridiagonalMatrix::multiply(const Vector& v) const {
  const std::size_t n = size();
  if (static_cast<std::size_t>(v.size()) != n) {
    throw DimensionError("tridiagonal multiply: vector length mismatch");
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < n; ++i) {
    double acc = main[i] * v[i];
    if (i > 0) acc += lower[i - 1] * v[i - 1];
    if (i + 1 < n) acc += upper[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

DenseMatrix TridiagonalMatrix::multiply(const DenseMatrix& v) const {
  const std::size_t n = size();
  if (static_cast<std::size_t>(v.rows()) != n) {
    throw DimensionError("tridiagonal multiply: row count mismatch");
  }
  DenseMatrix out(v.rows(), v.cols());
  for (std::size_t i = 0; i < n; ++i) {
    out.row(i) = main[i] * v.row(i);
    if (i > 0) out.row(i) += lower[i - 1] * v.row(i - 1);
    if (i + 1 < n) out.row(i) += upper[i] * v.row(i + 1);
  }
  return out;
}

DenseMatrix TridiagonalMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = main[i];
    if (i + 1 < n) {
      out(i + 1, i) = lower[i];
      out(i, i + 1) = upper[i];
    }
  }
  return out;
}

TridiagonalMatrix TridiagonalMatrix::operator+(const TridiagonalMatrix& other) const {
  if (other.size() != size()) throw DimensionError("tridiagonal sum: size mismatch");
  TridiagonalMatrix out = *this;
  for (std::size_t i = 0; i < main.size(); ++i) out.main[i] += other.main[i];
  for (std::size_t i = 0; i < lower.size(); ++i) {
    out.lower[i] += other.lower[i];
    out.upper[i] += other.upper[i];
  }
  return out;
}

DenseMatrix solve_tridiagonal(const TridiagonalMatrix& a, const DenseMatrix& rhs) {
  check_shape(a);
  const std::size_t n = a.size();
  if (static_cast<std::size_t>(rhs.rows()) != n) {
    throw DimensionError("solve_tridiagonal: rhs length mismatch");
  }
  std::vector<double> c_prime(n, 0.0);
  DenseMatrix x = rhs;

  double pivot = a.main[0];
  if (std::abs(pivot) < kPivotThreshold) throw SingularPivotError("solve_tridiagonal: zero pivot at row 0");
  if (n > 1) c_prime[0] = a.upper[0] / pivot;
  x.row(0) /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.main[i] - a.lower[i - 1] * c_prime[i - 1];
    if (std::abs(pivot) < kPivotThreshold) {
      throw SingularPivotError("solve_tridiagonal: zero pivot at row " + std::to_string(i));
    }
    if (i + 1 < n) c_prime[i] = a.upper[i] / pivot;
    x.row(i) = (x.row(i) - a.lower[i - 1] * x.row(i - 1)) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x.row(i) -= c_prime[i] * x.row(i + 1);
  }
  return x;
}

Vector solve_tridiagonal(const TridiagonalMatrix& a, const Vector& rhs) {
  DenseMatrix col = rhs;
  return solve_tridiagonal(a, col).col(0);
}

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t SeededRng::uniform_index(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform_index: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return static_cast<std::size_t>(draw % range);
}

std::string SeededRng::serialize() const {
  std::ostringstream out;
  out << seed_ << ' ' << engine_;
  return out.str();
}

void SeededRng::restore(const std::string& state) {
  std::istringstream in(state);
  in >> seed_ >> engine_;
  if (!in) throw InvalidArgument("SeededRng::restore: malformed state");
}

DenseMatrix gaussian_matrix(SeededRng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("gaussian_matrix: scale must be positive");
  DenseMatrix out(rows, cols);
  // Row-major fill order so the stream maps to entries independent of storage.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = scale * rng.normal();
  }
  return out;
}

}  // namespace nodeadapt
