#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ncfem/assembly.hpp"
#include "ncfem/linalg.hpp"

namespace ncfem {

struct ErrorSummary {
  double l2 = 0.0;
  double broken_h1 = 0.0;
  double energy = std::numeric_limits<double>::quiet_NaN();  ///< IPG only
  double consistency_dual = std::numeric_limits<double>::quiet_NaN();
  double inf_sup = std::numeric_limits<double>::quiet_NaN();
  double strang_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Norms of u - u_h by quadrature. The energy norm is evaluated for the IPG
/// scheme only.
ErrorSummary error_norms(const ProblemSpec& p, const FeFunction& uh, const MethodConfig& cfg);

/// Squared norm of a single field in the named inner product.
double field_norm(const ProblemSpec& p, const Mesh& m, const TraceSource& w, NormKind kind, double eta,
                  int degree);

/// Test-side norm for consistency duals: broken H1 seminorm for CR1, energy for IPG.
NormKind test_norm(const MethodConfig& cfg);
/// Trial-side norm of the error bound: the same as the test norm for CR1, the
/// extended energy norm for IPG.
NormKind extended_norm(const MethodConfig& cfg);

/// Dual norm of the exact-solution residual in the scheme's test norm.
double consistency_norm(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg);

struct BestApproximation {
  FeFunction w;
  double distance = 0.0;
};

/// Projection of the exact solution onto the space in the named inner product.
BestApproximation best_approximation(const ProblemSpec& p, const DiscreteSpace& s, NormKind kind,
                                     const MethodConfig& cfg);

struct StrangReport {
  double bound = 0.0;
  double alpha = 0.0;          ///< discrete inf-sup constant in the test norm
  double m_tilde = 0.0;        ///< 1.5 x the largest sampled ratio
  double m_sampled = 0.0;      ///< largest ratio over the random directions
  double m_direction = 0.0;    ///< ratio in the direction u - w*, sup over v_h exact
  double approx_ext = 0.0;     ///< ||u - w*|| in the extended norm
  double approx = 0.0;         ///< ||u - w*|| in the test norm
  double consistency = 0.0;    ///< dual norm of the exact residual
  double error = 0.0;          ///< ||u - u_h|| in the test norm
  bool dominates() const { return bound >= error; }
};

/// bound = (M/alpha) ||u - w*||_ext + ||u - w*|| + consistency / alpha, with
/// w* the best approximation in the extended norm and M sampled over 200
/// random trial functions w = t (u - w*) / |u - w*| + z / |z|.
StrangReport strang_bound(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg,
                          const SparseMatrix& A, const FeFunction& uh, std::uint64_t seed,
                          int dense_limit = kDenseLimit);

struct DualityReport {
  double term1 = 0.0;  ///< a_h(u - u_h, v - v_h)
  double term2 = 0.0;  ///< -[a_h(u - u_h, v) - <u - u_h, g>]
  double term3 = 0.0;  ///< -[a_h(u, v - v_h) - l_h(v - v_h)]
  double term4 = 0.0;  ///< (a_h - a)(u, v) - (l_h - l)(v)
  double a_minus_ah = 0.0;  ///< (a - a_h)(u, v)
  double pairing = 0.0;     ///< <u - u_h, g>
  double reconstruction_gap = 0.0;
  double relative_gap() const;
};

/// Four-term decomposition of <u - u_h, g> with the adjoint solution v and its
/// discrete approximation vh.
DualityReport aubin_nitsche(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg,
                            const FeFunction& uh, const FeFunction& vh);

/// Dual norm of r*_i = a_h(phi_i, v) - (g, phi_i) in the scheme's test norm.
double adjoint_consistency_norm(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                                const MethodConfig& cfg);

/// rate_i = log(v_i / v_{i+1}) / log(h_i / h_{i+1}); undefined for nonpositive values.
std::vector<std::optional<double>> rates(const std::vector<std::pair<double, double>>& rows);

}  // namespace ncfem
