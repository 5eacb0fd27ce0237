#pragma once

#include <random>

#include <Eigen/Dense>

#include "ncfem/mesh.hpp"

namespace ncfem::test {

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

// Vertices (0,0), (1,0), (0,1), every edge tagged `tag`.
inline Mesh unit_right_triangle(BoundaryTag tag = BoundaryTag::Gamma1, double scale = 1.0) {
  return Mesh({Vec2(0, 0), Vec2(scale, 0), Vec2(0, scale)}, {{0, 1, 2}}, {{0, 1, tag}, {1, 2, tag}, {2, 0, tag}});
}

}  // namespace ncfem::test
