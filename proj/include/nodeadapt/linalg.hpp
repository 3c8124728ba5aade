#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nodeadapt {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Symmetric or general tridiagonal matrix stored by diagonals.
///
/// `lower[i]` is entry (i+1, i) and `upper[i]` is entry (i, i+1).
struct TridiagonalMatrix {
  std::vector<double> lower;
  std::vector<double> main;
  std::vector<double> upper;

  TridiagonalMatrix() = default;
  explicit TridiagonalMatrix(std::size_t size);
  TridiagonalMatrix(std::vector<double> lower, std::vector<double> main,
                    std::vector<double> upper);

  std::size_t size() const { return main.size(); }

  Vector multiply(const Vector& v) const;
  /// Applies the matrix to every column of `v`.
  DenseMatrix multiply(const DenseMatrix& v) const;
  DenseMatrix to_dense() const;

  TridiagonalMatrix operator+(const TridiagonalMatrix& other) const;
};

/// Thomas algorithm without pivoting. Throws SingularPivotError when a pivot
/// magnitude drops below 1e-14.
Vector solve_tridiagonal(const TridiagonalMatrix& a, const Vector& rhs);

/// Multiple right-hand sides, one per column.
DenseMatrix solve_tridiagonal(const TridiagonalMatrix& a, const DenseMatrix& rhs);

/// Deterministic random stream: mt19937_64 for bits, Box-Muller for normals.
/// Distribution code is ours so the stream does not depend on the standard
/// library vendor.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);

  std::string serialize() const;
  void restore(const std::string& state);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// i.i.d. normal entries with standard deviation `scale`.
DenseMatrix gaussian_matrix(SeededRng& rng, Eigen::Index rows, Eigen::Index cols,
                            double scale);

}  // namespace nodeadapt
