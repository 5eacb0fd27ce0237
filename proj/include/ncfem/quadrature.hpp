#pragma once

#include <vector>

#include "ncfem/fields.hpp"

namespace ncfem {

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// n-point Gauss-Legendre rule mapped to [0, 1], exact to degree 2n - 1.
LineRule gauss_legendre(int n);

/// Smallest Gauss-Legendre rule exact to `degree`.
const LineRule& line_rule(int degree);

/// Collapsed (Duffy) tensor Gauss rule exact to `degree` on the triangle.
const TriangleRule& triangle_rule(int degree);

}  // namespace ncfem
