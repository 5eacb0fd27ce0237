#include "ncfem/linalg.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "ncfem/error.hpp"

namespace ncfem {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

}  // namespace

VectorXd solve(const SparseMatrix& A, const VectorXd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw Error(ErrorCode::InvalidArgument, "solve needs a square system matching the rhs");
  ColMatrix Ac(A);
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(Ac);
  lu.factorize(Ac);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem, "sparse LU failed: " + lu.lastErrorMessage());
  VectorXd x = lu.solve(b);
  double res = (A * x - b).norm();
  double scale = A.norm() * x.norm() + b.norm();
  if (!std::isfinite(res) || res > 1e-10 * scale) {
    std::ostringstream os;
    os << "residual " << res << " exceeds 1e-10 * " << scale << " (numerically singular)";
    throw Error(ErrorCode::SingularSystem, os.str());
  }
  return x;
}

VectorXd solve(const SparseSystem& sys) { return solve(sys.matrix, sys.rhs); }

GramMatrix gram(const DiscreteSpace& s, NormKind kind, const ProblemSpec& p, const MethodConfig& cfg) {
  GramMatrix g;
  g.kind = kind;
  g.matrix = assemble_matrix(p, s, norm_form(kind, cfg.eta), s.assembly_degree());
  return g;
}

struct DualNorm::Impl {
  Eigen::SimplicialLLT<ColMatrix> llt;
};

DualNorm::DualNorm(const SparseMatrix& M) : impl_(std::make_unique<Impl>()) {
  ColMatrix Mc(M);
  impl_->llt.compute(Mc);
  if (impl_->llt.info() != Eigen::Success)
    throw Error(ErrorCode::RankDeficient, "Gram matrix is not positive definite");
  // exact-arithmetic zero pivots come out as round-off sized positives
  VectorXd d = ColMatrix(impl_->llt.matrixL()).diagonal();
  double lo = d.cwiseAbs2().minCoeff(), hi = d.cwiseAbs2().maxCoeff();
  if (!(lo > 1e-12 * hi)) throw Error(ErrorCode::RankDeficient, "Gram matrix is numerically singular");
}

DualNorm::~DualNorm() = default;
DualNorm::DualNorm(DualNorm&&) noexcept = default;
DualNorm& DualNorm::operator=(DualNorm&&) noexcept = default;

VectorXd DualNorm::riesz(const VectorXd& r) const { return impl_->llt.solve(r); }

double DualNorm::operator()(const VectorXd& r) const {
  if (r.size() == 0) return 0.0;
  return std::sqrt(std::max(0.0, r.dot(riesz(r))));
}

double dual_norm(const VectorXd& r, const GramMatrix& M) { return dual_norm(r, M.matrix); }
double dual_norm(const VectorXd& r, const SparseMatrix& M) { return DualNorm(M)(r); }

namespace {

Eigen::LLT<MatrixXd> dense_cholesky(const SparseMatrix& M) {
  Eigen::LLT<MatrixXd> llt{MatrixXd(M)};
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteGram, "Gram matrix is not positive definite");
  return llt;
}

// Smallest eigenvalue of a symmetric pencil (H, M) by block inverse subspace
// iteration. `step` applies H^{-1} M (possibly shifted), `project` returns the
// Rayleigh-Ritz pair (Y^T H Y, Y^T M Y).
double subspace_iteration(Eigen::Index n, const std::function<MatrixXd(const MatrixXd&)>& step,
                          const std::function<std::pair<MatrixXd, MatrixXd>(const MatrixXd&)>& project) {
  const Eigen::Index p = std::min<Eigen::Index>(n, 8);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);

  double lam = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 500; ++it) {
    MatrixXd Y = step(X);
    Eigen::HouseholderQR<MatrixXd> qr(Y);
    Y = qr.householderQ() * MatrixXd::Identity(n, p);
    auto [Hp, Mp] = project(Y);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Hp, Mp);
    if (ges.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteGram, "projected Gram is not definite");
    X = Y * ges.eigenvectors();
    double next = ges.eigenvalues()[0];
    bool converged = it > 2 && std::abs(next - lam) <= 1e-14 * std::abs(next);
    lam = next;
    if (converged) break;
  }
  return lam;
}

}  // namespace

double inf_sup(const SparseMatrix& A, const SparseMatrix& M_U, const SparseMatrix& M_V, int dense_limit) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || M_U.rows() != n || M_V.rows() != n)
    throw Error(ErrorCode::InvalidArgument, "inf_sup needs square matrices of equal size");
  if (n == 0) return 0.0;

  if (n <= dense_limit) {
    auto lu = dense_cholesky(M_U);
    auto lv = dense_cholesky(M_V);
    MatrixXd X = lv.matrixL().solve(MatrixXd(A));
    MatrixXd B = lu.matrixL().solve(X.transpose()).transpose();
    Eigen::BDCSVD<MatrixXd> svd(B);
    return svd.singularValues().minCoeff();
  }

  ColMatrix Ac(A), MVc(M_V);
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(Ac);
  if (lu.info() != Eigen::Success) return 0.0;  // singular operator: no inf-sup stability
  Eigen::SimplicialLLT<ColMatrix> mv(MVc);
  if (mv.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteGram, "M_V is not positive definite");

  // (A^T M_V^{-1} A)^{-1} M_U = A^{-1} M_V A^{-T} M_U
  auto step = [&](const MatrixXd& X) -> MatrixXd {
    MatrixXd T = M_U * X;
    T = lu.transpose().solve(T);
    T = M_V * T;
    return lu.solve(T);
  };
  auto project = [&](const MatrixXd& Y) {
    MatrixXd AY = A * Y;
    MatrixXd H = AY.transpose() * mv.solve(AY);
    MatrixXd Mp = Y.transpose() * (M_U * Y);
    return std::make_pair(MatrixXd(0.5 * (H + H.transpose())), MatrixXd(0.5 * (Mp + Mp.transpose())));
  };
  double lam = subspace_iteration(n, step, project);
  return std::sqrt(std::max(lam, 0.0));
}

double min_sym_eig(const SparseMatrix& A, const SparseMatrix& M, int dense_limit) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || M.rows() != n) throw Error(ErrorCode::InvalidArgument, "min_sym_eig size mismatch");
  if (n == 0) return 0.0;
  SparseMatrix S = 0.5 * (A + SparseMatrix(A.transpose()));

  if (n <= dense_limit) {
    MatrixXd Md(M);
    if (Eigen::LLT<MatrixXd>(Md).info() != Eigen::Success)
      throw Error(ErrorCode::IndefiniteGram, "Gram matrix is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(MatrixXd(S), Md, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteGram, "generalized eigensolver failed");
    return ges.eigenvalues()[0];
  }

  ColMatrix Sc(S), Mc(M);
  if (Eigen::SimplicialLLT<ColMatrix>(Mc).info() != Eigen::Success)
    throw Error(ErrorCode::IndefiniteGram, "Gram matrix is not positive definite");

  // find a shift below the spectrum: S - sigma M positive definite (inertia of LDL^T)
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(S.coeff(i, i)) / M.coeff(i, i));
  double sigma = 0.0;
  Eigen::SimplicialLDLT<ColMatrix> ldlt;
  for (int k = 0;; ++k) {
    ldlt.compute(ColMatrix(Sc - sigma * Mc));
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) break;
    if (k > 60) throw Error(ErrorCode::IndefiniteGram, "no definite shift found");
    sigma = -scale * std::ldexp(1.0, k);
  }
  auto step = [&](const MatrixXd& X) -> MatrixXd { return ldlt.solve(MatrixXd(M * X)); };
  auto project = [&](const MatrixXd& Y) {
    MatrixXd H = Y.transpose() * (S * Y);
    MatrixXd Mp = Y.transpose() * (M * Y);
    return std::make_pair(MatrixXd(0.5 * (H + H.transpose())), MatrixXd(0.5 * (Mp + Mp.transpose())));
  };
  return subspace_iteration(n, step, project);
}

}  // namespace ncfem
