#pragma once

#include <functional>

#include <Eigen/Core>

namespace ncfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Mat2(const Vec2&)>;

/// Boundary data may depend on the outward unit normal as well as the position.
using BoundaryField = std::function<double(const Vec2& x, const Vec2& normal)>;

inline ScalarField constant_field(double value) {
  return [value](const Vec2&) { return value; };
}

inline BoundaryField constant_boundary_field(double value) {
  return [value](const Vec2&, const Vec2&) { return value; };
}

}  // namespace ncfem
