#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncfem/fields.hpp"
#include "ncfem/mesh.hpp"

namespace ncfem {

enum class Scheme { CR1, IPG };

const char* to_string(Scheme s);

struct ManufacturedSolution {
  ScalarField u;
  VectorField grad;
  MatrixField hess;
};

/// Adjoint data for duality checks: v solves the adjoint problem with source g.
struct AdjointData {
  ManufacturedSolution v;
  ScalarField g;
};

struct CoercivityMode {
  enum class Kind { DirichletMeasure, ReactionLowerBound };
  Kind kind = Kind::DirichletMeasure;
  double r0 = 0.0;

  static CoercivityMode dirichlet_measure() { return {Kind::DirichletMeasure, 0.0}; }
  static CoercivityMode reaction_lower_bound(double r0) { return {Kind::ReactionLowerBound, r0}; }
  std::string describe() const;
};

struct ProblemSpec {
  std::string name;
  std::string description;

  MatrixField K;
  VectorField c;
  ScalarField div_c;
  ScalarField r;
  ScalarField f;

  BoundaryField alpha;
  BoundaryField g1;
  BoundaryField g2;
  BoundaryField g3;

  double k0 = 1.0;
  std::optional<ManufacturedSolution> exact;
  std::optional<AdjointData> adjoint;

  /// Boundary tagging for the unit-square generator.
  BoundaryLayout layout;
  CoercivityMode mode;
};

/// Zero coefficients, zero data, K = I, all of the boundary Dirichlet.
ProblemSpec default_problem();

/// Row-wise divergence of K, needed to manufacture sources.
using MatrixDivergence = VectorField;

/// f = -div(K grad u) + div(c u) + r u for the given analytic data.
ScalarField make_source(const MatrixField& K, const MatrixDivergence& div_K, const VectorField& c,
                        const ScalarField& div_c, const ScalarField& r, const ManufacturedSolution& u);

/// Adjoint source g = -div(K grad v) - c.grad v + r v.
ScalarField make_adjoint_source(const MatrixField& K, const MatrixDivergence& div_K,
                                const VectorField& c, const ScalarField& r,
                                const ManufacturedSolution& v);

/// Fills g1, g2, g3 from the exact solution:
///   g1 = (K grad u - c u).nu, g2 = (K grad u - c u).nu + alpha u, g3 = u.
ProblemSpec derive_boundary_data(ProblemSpec p);

/// The nonconforming path eliminates Dirichlet DOFs, so u must vanish on Gamma3.
/// Throws invalid-manufactured-solution if |u| > tol at a Gamma3 face midpoint.
void require_homogeneous_dirichlet(const ProblemSpec& p, const Mesh& m, double tol = 1e-12);

struct ConditionResult {
  std::string name;
  bool pass = true;
  bool counts = true;  ///< whether it enters the overall verdict
  int samples = 0;
  double worst_value = 0.0;  ///< smallest margin seen (negative = violated)
  Vec2 worst_point = Vec2::Zero();
};

struct AuditReport {
  std::vector<ConditionResult> conditions;
  bool pass = true;

  const ConditionResult* find(const std::string& name) const;
  std::string format() const;
};

namespace condition {
inline constexpr const char* kEllipticity = "K >= k0 I";
inline constexpr const char* kReaction = "r + div(c)/2 >= 0";
inline constexpr const char* kInflowRobin = "nu.c >= 0 on Gamma21";
inline constexpr const char* kRobin = "alpha - nu.c/2 >= 0 on Gamma22";
inline constexpr const char* kNeumann = "nu.c <= 0 on Gamma1";
inline constexpr const char* kDirichletOutflow = "nu.c <= 0 on Gamma3";
inline constexpr const char* kDirichletMeasure = "|Gamma3| > 0";
inline constexpr const char* kReactionBound = "r + div(c)/2 >= r0";
}  // namespace condition

/// Samples the sign conditions at element and face quadrature points with a
/// slack of 1e-12. The Gamma3 outflow condition only matters for the
/// interior-penalty scheme; for CR1 it is reported but does not count.
AuditReport audit_conditions(const ProblemSpec& p, const Mesh& m, const CoercivityMode& mode,
                             Scheme scheme);

}  // namespace ncfem
