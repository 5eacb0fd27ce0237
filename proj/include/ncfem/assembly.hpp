#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ncfem/fespace.hpp"
#include "ncfem/forms.hpp"
#include "ncfem/problem.hpp"

namespace ncfem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct MethodConfig {
  Scheme scheme = Scheme::CR1;
  int theta = -1;    ///< IPG only: -1 SIPG, 0 IIPG, 1 NIPG
  double eta = 1.0;  ///< IPG only
  int degree = 1;    ///< IPG only

  static MethodConfig cr() { return {}; }
  static MethodConfig ipg(int theta, double eta, int degree) { return {Scheme::IPG, theta, eta, degree}; }
};

struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Quadrature degree for error norms and consistency checks, well above the
/// assembly degree so that identities between forms hold to round-off.
inline int analysis_degree(const DiscreteSpace& s) { return 2 * s.degree() + 8; }

/// Builds the space the method lives in: CR1 or broken P_k.
DiscreteSpace build_space(const Mesh& m, const MethodConfig& cfg);

BilinearForm discrete_bilinear(const MethodConfig& cfg);
LinearForm discrete_linear(const ProblemSpec& p, const MethodConfig& cfg);

/// Matrix M_ij = form(phi_j, phi_i), compressed, explicit zeros removed.
SparseMatrix assemble_matrix(const ProblemSpec& p, const DiscreteSpace& s, const BilinearForm& form,
                             int degree);
Eigen::VectorXd assemble_vector(const ProblemSpec& p, const DiscreteSpace& s, const LinearForm& form,
                                int degree);

SparseSystem assemble_cr(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s);
SparseSystem assemble_ipg(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg);
SparseSystem assemble(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg);

/// Transposed primal matrix with rhs_i = (g, phi_i).
SparseSystem assemble_adjoint(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                              const MethodConfig& cfg, const ScalarField& g);

/// r_i = a_h(u, phi_i) - l_h(phi_i) with the exact solution in the first slot.
Eigen::VectorXd residual_of_exact(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                                  const MethodConfig& cfg);

/// r*_i = a_h(phi_i, v) - (g, phi_i) with the exact adjoint solution v.
Eigen::VectorXd adjoint_residual(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                                 const MethodConfig& cfg);

/// max over elements and faces of ||v||_F h_F^{1/2} / ||v||_K over v in P_k,
/// k >= 0. Computed once per similarity class of elements.
double estimate_trace_constant(const Mesh& m, int k);

struct StabilityAdvice {
  double trace_constant = 0.0;  ///< for gradients of P_k, i.e. over P_{k-1}
  double k_inf = 0.0;           ///< sampled max spectral norm of K
  double eta_min = 0.0;         ///< (1 - theta) 3 C_tr^2 ||K|| / 4
  bool satisfied = true;
  std::string message;
};

StabilityAdvice stability_advisory(const ProblemSpec& p, const Mesh& m, const MethodConfig& cfg);

/// Twice the advisory bound. For theta = 1 the bound is void, so the
/// theta = 0 value is used.
double auto_eta(const ProblemSpec& p, const Mesh& m, int theta, int degree);

}  // namespace ncfem
