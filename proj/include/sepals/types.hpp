#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace sepals {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A unit vector in R^p. Construction validates the norm, so any Direction
/// in hand is known to lie on the sphere.
class Direction {
 public:
  static constexpr double kUnitTolerance = 1e-12;
  static constexpr double kZeroNorm = 1e-14;

  /// Wraps an already-normalized vector. Throws DomainError if
  /// | ||coords|| - 1 | exceeds kUnitTolerance.
  explicit Direction(Vector coords);

  /// Normalizes `v`. Throws DegenerateDirection when ||v|| < kZeroNorm.
  static Direction normalize(const Vector& v);

  /// (1, ..., 1, 0, ..., 0) / sqrt(m) with the first m coordinates set.
  static Direction leading_ones(std::size_t p, std::size_t m);

  /// Canonical basis vector e_j (0-based j).
  static Direction basis(std::size_t p, std::size_t j);

  const Vector& coords() const noexcept { return coords_; }
  Eigen::Index size() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index j) const { return coords_[j]; }
  double dot(const Direction& other) const { return coords_.dot(other.coords_); }

  Direction operator-() const;

 private:
  struct Unchecked {};
  Direction(Vector coords, Unchecked) : coords_(std::move(coords)) {}

  Vector coords_;
};

/// An n-sample of (X_i, Y_i): X is n x p, Y has n entries. Immutable.
class Dataset {
 public:
  /// Throws DomainError unless n >= 2, p >= 2, rows(X) == size(Y) and every
  /// entry is finite.
  Dataset(Matrix X, Vector Y);

  const Matrix& X() const noexcept { return X_; }
  const Vector& Y() const noexcept { return Y_; }
  Eigen::Index n() const noexcept { return Y_.size(); }
  Eigen::Index p() const noexcept { return X_.cols(); }

 private:
  Matrix X_;
  Vector Y_;
};

}  // namespace sepals
