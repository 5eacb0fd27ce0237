#pragma once

#include <memory>

#include <Eigen/Core>

#include "ncfem/assembly.hpp"

namespace ncfem {

/// Sparse LU solve. Throws singular-system if the factorization fails or the
/// residual check ||Ax - b|| <= 1e-10 (||A||_F ||x|| + ||b||) does not hold.
Eigen::VectorXd solve(const SparseSystem& sys);
Eigen::VectorXd solve(const SparseMatrix& A, const Eigen::VectorXd& b);

struct GramMatrix {
  NormKind kind = NormKind::L2;
  SparseMatrix matrix;
};

/// M_ij = <phi_j, phi_i> in the named inner product; EnergyVh and ExtendedVh
/// take eta from the method.
GramMatrix gram(const DiscreteSpace& s, NormKind kind, const ProblemSpec& p, const MethodConfig& cfg);

/// Reusable factorization for sqrt(r^T M^{-1} r).
class DualNorm {
 public:
  explicit DualNorm(const SparseMatrix& M);
  ~DualNorm();
  DualNorm(DualNorm&&) noexcept;
  DualNorm& operator=(DualNorm&&) noexcept;

  double operator()(const Eigen::VectorXd& r) const;
  /// The Riesz representative M^{-1} r.
  Eigen::VectorXd riesz(const Eigen::VectorXd& r) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// sqrt(r^T M^{-1} r); rank-deficiency error if M is singular.
double dual_norm(const Eigen::VectorXd& r, const GramMatrix& M);
double dual_norm(const Eigen::VectorXd& r, const SparseMatrix& M);

inline constexpr int kDenseLimit = 4000;

/// Smallest singular value of L_V^{-1} A L_U^{-T} with M = L L^T. Dense up to
/// dense_limit unknowns, otherwise block inverse iteration on A^T M_V^{-1} A.
double inf_sup(const SparseMatrix& A, const SparseMatrix& M_U, const SparseMatrix& M_V,
               int dense_limit = kDenseLimit);

/// Smallest eigenvalue of (A + A^T)/2 relative to M.
double min_sym_eig(const SparseMatrix& A, const SparseMatrix& M, int dense_limit = kDenseLimit);

}  // namespace ncfem
