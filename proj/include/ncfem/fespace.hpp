#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ncfem/fields.hpp"
#include "ncfem/mesh.hpp"

namespace ncfem {

using Bary = Eigen::Vector3d;

enum class SpaceKind { CR1, BrokenPk };

/// Discrete space on a mesh. Holds a pointer to the mesh, which must outlive it.
///
/// Local basis functions are written in barycentric coordinates:
///  - CR1: phi_i = 1 - 2 lambda_i, one per face, face i opposite vertex i;
///    Gamma3 faces carry no DOF.
///  - BrokenPk: Lagrange basis on the principal lattice of degree k.
class DiscreteSpace {
 public:
  static DiscreteSpace cr1(const Mesh& m);
  static DiscreteSpace broken(const Mesh& m, int k);

  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  const Mesh& mesh() const { return *mesh_; }
  int ndof() const { return ndof_; }
  int local_size() const { return nloc_; }

  /// Global DOF of local basis function i on element t, or -1 if eliminated.
  int dof(int t, int i) const { return element_dofs_[static_cast<size_t>(t) * nloc_ + i]; }
  /// CR1 only: DOF attached to face f, or -1 on Gamma3.
  int face_dof(int f) const { return face_dofs_.at(f); }

  /// Values and barycentric partial derivatives of all local basis functions.
  void reference_basis(const Bary& lambda, double* values, Eigen::Vector3d* dlambda) const;
  /// Lattice nodes (barycentric) for BrokenPk, face midpoints for CR1.
  const std::vector<Bary>& local_nodes() const { return nodes_; }

  /// Physical gradients of the barycentric coordinates on element t.
  const std::array<Vec2, 3>& lambda_gradients(int t) const { return grad_lambda_[t]; }
  Vec2 to_physical(int t, const Bary& lambda) const;

  /// Quadrature degree of the system assembly (2k + 2).
  int assembly_degree() const { return 2 * degree_ + 2; }

 private:
  SpaceKind kind_ = SpaceKind::CR1;
  int degree_ = 1;
  const Mesh* mesh_ = nullptr;
  int ndof_ = 0;
  int nloc_ = 0;
  std::vector<int> element_dofs_;
  std::vector<int> face_dofs_;
  std::vector<Bary> nodes_;
  std::vector<std::array<Vec2, 3>> grad_lambda_;
};

/// Barycentric coordinates, on element t, of the point at parameter s of face f
/// (s = 0 at f.endpoints[0], s = 1 at f.endpoints[1]).
Bary face_point_lambda(const Mesh& m, int t, const Face& f, double s);

Bary reference_to_bary(const Vec2& ref);

/// Dimension of P_k in two variables.
inline int pk_dim(int k) { return (k + 1) * (k + 2) / 2; }

/// Lagrange basis of P_k (k >= 0) on the principal lattice, in the node
/// order a2 = 0..k, a1 = 0..k-a2. Derivatives are with respect to lambda.
void pk_basis(int k, const Bary& lambda, double* values, Eigen::Vector3d* dlambda);

struct FeFunction {
  const DiscreteSpace* space = nullptr;
  Eigen::VectorXd coeffs;

  FeFunction() = default;
  explicit FeFunction(const DiscreteSpace& s) : space(&s), coeffs(Eigen::VectorXd::Zero(s.ndof())) {}
  FeFunction(const DiscreteSpace& s, Eigen::VectorXd c);
};

struct PointValue {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
};

PointValue eval_bary(const FeFunction& fn, int t, const Bary& lambda);
/// `ref` is a point of the reference triangle (0,0), (1,0), (0,1).
PointValue eval(const FeFunction& fn, int t, const Vec2& ref);

/// Nodal interpolant: face-midpoint values for CR1, lattice values for BrokenPk.
FeFunction interpolate(const DiscreteSpace& s, const ScalarField& u);

/// Elementwise L2 projection onto BrokenPk.
FeFunction elementwise_l2_projection(const DiscreteSpace& s, const ScalarField& u, int quad_degree);

struct ScalarJump {
  Vec2 jump;       ///< v_K nu_K + v_N nu_N
  double average;  ///< (v_K + v_N) / 2
};

struct VectorJump {
  double jump;   ///< p_K . nu_K + p_N . nu_N
  Vec2 average;  ///< (p_K + p_N) / 2
};

/// Jump and average across a face with owner normal nu; no neighbor trace on the boundary.
ScalarJump jump_average(const Vec2& nu, double v_owner, std::optional<double> v_neighbor);
VectorJump jump_average(const Vec2& nu, const Vec2& p_owner, std::optional<Vec2> p_neighbor);

}  // namespace ncfem
