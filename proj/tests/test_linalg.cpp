#include <cmath>
#include <filesystem>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "ncfem/error.hpp"
#include "ncfem/linalg.hpp"
#include "ncfem/matrix_market.hpp"
#include "ncfem/registry.hpp"
#include "support.hpp"

using namespace ncfem;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

SparseMatrix sparse(const MatrixXd& d) { return d.sparseView(); }

MatrixXd random_spd(std::mt19937_64& rng, int n) {
  MatrixXd B = test::random_matrix(rng, n, n);
  return B * B.transpose() + 0.5 * MatrixXd::Identity(n, n);
}

// alpha^2 = min eig of (A^T M_V^{-1} A, M_U)
double inf_sup_oracle(const MatrixXd& A, const MatrixXd& MU, const MatrixXd& MV) {
  MatrixXd H = A.transpose() * MV.ldlt().solve(A);
  H = 0.5 * (H + H.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(H, MU);
  return std::sqrt(ges.eigenvalues()[0]);
}

Mesh classified(const ProblemSpec& p, int n) {
  return classify_boundary(generate_unit_square(n, p.layout), p.alpha, p.c).mesh;
}

}  // namespace

TEST(Linalg, SolveSmallSystems) {
  std::mt19937_64 rng(1);
  VectorXd b = test::random_vector(rng, 5);
  SparseMatrix I(5, 5);
  I.setIdentity();
  EXPECT_LE((solve(I, b) - b).norm(), 1e-15);

  MatrixXd A(2, 2);
  A << 2, 1, 1, 2;
  VectorXd x = solve(sparse(A), VectorXd::Constant(2, 3.0));
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);

  MatrixXd S(2, 2);
  S << 1, 2, 2, 4;
  try {
    solve(sparse(S), VectorXd::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
  }
}

TEST(Linalg, CrPatchTest) {
  ProblemSpec p = default_problem();
  p.layout = side_layout(BoundaryTag::Gamma3, BoundaryTag::Gamma1, BoundaryTag::Gamma1, BoundaryTag::Gamma1);
  p.exact = ManufacturedSolution{[](const Vec2& x) { return x.x(); }, [](const Vec2&) { return Vec2(1, 0); },
                                 [](const Vec2&) { return Mat2(Mat2::Zero()); }};
  p = derive_boundary_data(p);
  Mesh m = classified(p, 2);
  DiscreteSpace s = DiscreteSpace::cr1(m);
  VectorXd u = solve(assemble(p, m, s, MethodConfig::cr()));
  for (const auto& f : m.faces()) {
    if (s.face_dof(f.id) < 0) continue;
    EXPECT_NEAR(u[s.face_dof(f.id)], m.midpoint(f.id).x(), 1e-12);
  }
}

TEST(Linalg, GramProperties) {
  ProblemSpec p = make_problem("P2dg");
  Mesh m = classified(p, 4);
  MethodConfig cfg = MethodConfig::ipg(-1, 6.0, 2);
  DiscreteSpace s = build_space(m, cfg);

  SparseMatrix L2 = gram(s, NormKind::L2, p, cfg).matrix;
  VectorXd one = VectorXd::Ones(s.ndof());
  EXPECT_NEAR(one.dot(L2 * one), 1.0, 1e-13);

  SparseMatrix E = gram(s, NormKind::EnergyVh, p, cfg).matrix;
  SparseMatrix X = gram(s, NormKind::ExtendedVh, p, cfg).matrix;
  for (const SparseMatrix* M : {&L2, &E, &X}) {
    MatrixXd D(*M);
    EXPECT_LE((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-13 * D.cwiseAbs().maxCoeff());
  }
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    VectorXd v = test::random_vector(rng, s.ndof());
    EXPECT_GE(v.dot(X * v), v.dot(E * v));
  }
  // energy dominates k0 times the broken seminorm
  SparseMatrix H = gram(s, NormKind::BrokenH1Semi, p, cfg).matrix;
  for (int i = 0; i < 20; ++i) {
    VectorXd v = test::random_vector(rng, s.ndof());
    EXPECT_GE(v.dot(E * v), p.k0 * v.dot(H * v));
  }
  EXPECT_NO_THROW(DualNorm{E});
  EXPECT_NO_THROW(DualNorm{X});
}

TEST(Linalg, DualNormBasics) {
  SparseMatrix I(4, 4);
  I.setIdentity();
  VectorXd r(4);
  r << 1, -2, 3, 0.5;
  EXPECT_NEAR(dual_norm(r, I), r.norm(), 1e-15);
  EXPECT_EQ(dual_norm(VectorXd::Zero(4), I), 0.0);
}

TEST(Linalg, DualNormMonteCarlo) {
  std::mt19937_64 rng(3);
  MatrixXd M = random_spd(rng, 4);
  VectorXd r = test::random_vector(rng, 4);
  double exact = dual_norm(r, sparse(M));
  Eigen::LLT<MatrixXd> llt(M);
  double sampled = 0.0;
  for (int i = 0; i < 100000; ++i) {
    VectorXd v = test::random_vector(rng, 4);
    sampled = std::max(sampled, std::abs(r.dot(v)) / std::sqrt(v.dot(M * v)));
  }
  EXPECT_LE(sampled, exact * (1 + 1e-12));
  EXPECT_GE(sampled, 0.98 * exact);
}

TEST(Linalg, DualNormRankDeficient) {
  ProblemSpec p = make_problem("P1");
  Mesh m = classified(p, 2);
  MethodConfig cfg = MethodConfig::ipg(-1, 4.0, 1);
  DiscreteSpace s = build_space(m, cfg);
  try {
    DualNorm d(gram(s, NormKind::BrokenH1Semi, p, cfg).matrix);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(Linalg, InfSupTrivialCases) {
  SparseMatrix I(6, 6);
  I.setIdentity();
  EXPECT_NEAR(inf_sup(I, I, I), 1.0, 1e-14);
  std::mt19937_64 rng(4);
  SparseMatrix A = sparse(random_spd(rng, 6));
  EXPECT_NEAR(inf_sup(A, A, A), 1.0, 1e-10);
  EXPECT_NEAR(inf_sup(A, A, A, 0), 1.0, 1e-10);
}

TEST(Linalg, InfSupMatchesOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    MatrixXd A = test::random_matrix(rng, 20, 20) + 4 * MatrixXd::Identity(20, 20);
    MatrixXd MU = random_spd(rng, 20), MV = random_spd(rng, 20);
    double want = inf_sup_oracle(A, MU, MV);
    EXPECT_NEAR(inf_sup(sparse(A), sparse(MU), sparse(MV)), want, 1e-10 * std::max(1.0, want));
    EXPECT_NEAR(inf_sup(sparse(A), sparse(MU), sparse(MV), 0), want, 1e-10 * std::max(1.0, want));
  }
}

TEST(Linalg, MinSymEig) {
  std::mt19937_64 rng(6);
  MatrixXd M = random_spd(rng, 20);
  EXPECT_NEAR(min_sym_eig(sparse(2 * M), sparse(M)), 2.0, 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    MatrixXd A = test::random_matrix(rng, 20, 20);
    MatrixXd S = 0.5 * (A + A.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(S, M);
    double want = ges.eigenvalues()[0];
    EXPECT_NEAR(min_sym_eig(sparse(A), sparse(M)), want, 1e-10 * std::max(1.0, std::abs(want)));
    EXPECT_NEAR(min_sym_eig(sparse(A), sparse(M), 0), want, 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST(Linalg, CrCoercivity) {
  for (const char* name : {"P1", "P2"}) {
    ProblemSpec p = make_problem(name);
    Mesh m = classified(p, 8);
    DiscreteSpace s = DiscreteSpace::cr1(m);
    MethodConfig cfg = MethodConfig::cr();
    double lam = min_sym_eig(assemble(p, m, s, cfg).matrix, gram(s, NormKind::BrokenH1Semi, p, cfg).matrix);
    EXPECT_GE(lam, p.k0 - 1e-8) << name;
  }
}

TEST(Linalg, MatrixMarketRoundTrip) {
  ProblemSpec p = make_problem("P2dg");
  Mesh m = classified(p, 2);
  MethodConfig cfg = MethodConfig::ipg(0, 5.0, 1);
  DiscreteSpace s = build_space(m, cfg);
  SparseSystem sys = assemble(p, m, s, cfg);
  auto dir = std::filesystem::temp_directory_path() / "ncfem_mm_test";
  std::filesystem::create_directories(dir);
  write_matrix_market((dir / "A.mtx").string(), sys.matrix);
  write_matrix_market((dir / "b.mtx").string(), sys.rhs);
  SparseMatrix A = read_matrix_market((dir / "A.mtx").string());
  VectorXd b = read_matrix_market_vector((dir / "b.mtx").string());
  EXPECT_LE((MatrixXd(A) - MatrixXd(sys.matrix)).cwiseAbs().maxCoeff(), 1e-15 * MatrixXd(A).cwiseAbs().maxCoeff());
  EXPECT_LE((b - sys.rhs).cwiseAbs().maxCoeff(), 1e-15 * b.cwiseAbs().maxCoeff());
  EXPECT_THROW(read_matrix_market((dir / "missing.mtx").string()), Error);
  std::filesystem::remove_all(dir);
}
