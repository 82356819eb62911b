#include "sepals/types.hpp"

#include "sepals/error.hpp"

#include <cmath>
#include <string>

namespace sepals {

Direction::Direction(Vector coords) : coords_(std::move(coords)) {
  const double norm = coords_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitTolerance) {
    throw DomainError("Direction: vector is not unit-norm (norm = " +
                      std::to_string(norm) + ")");
  }
}

Direction Direction::normalize(const Vector& v) {
  const double norm = v.norm();
  if (!(norm >= kZeroNorm) || !std::isfinite(norm)) {
    throw DegenerateDirection("cannot normalize a vector of norm " +
                              std::to_string(norm));
  }
  return Direction(v / norm, Unchecked{});
}

Direction Direction::leading_ones(std::size_t p, std::size_t m) {
  if (m == 0 || m > p) {
    throw DomainError("leading_ones: need 1 <= m <= p");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(p));
  v.head(static_cast<Eigen::Index>(m)).setOnes();
  return normalize(v);
}

Direction Direction::basis(std::size_t p, std::size_t j) {
  if (j >= p) {
    throw DomainError("basis: index out of range");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(p));
  v[static_cast<Eigen::Index>(j)] = 1.0;
  return Direction(std::move(v), Unchecked{});
}

Direction Direction::operator-() const { return Direction(-coords_, Unchecked{}); }

Dataset::Dataset(Matrix X, Vector Y) : X_(std::move(X)), Y_(std::move(Y)) {
  if (X_.rows() != Y_.size()) {
    throw DomainError("Dataset: X has " + std::to_string(X_.rows()) +
                      " rows but Y has " + std::to_string(Y_.size()) + " entries");
  }
  if (Y_.size() < 2 || X_.cols() < 2) {
    throw DomainError("Dataset: need n >= 2 and p >= 2");
  }
  if (!X_.allFinite() || !Y_.allFinite()) {
    throw DomainError("Dataset: non-finite entry");
  }
}

}  // namespace sepals
