#include "ncfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ncfem/error.hpp"
#include "ncfem/quadrature.hpp"

namespace ncfem {

DiscreteSpace build_space(const Mesh& m, const MethodConfig& cfg) {
  if (cfg.scheme == Scheme::CR1) return DiscreteSpace::cr1(m);
  return DiscreteSpace::broken(m, cfg.degree);
}

BilinearForm discrete_bilinear(const MethodConfig& cfg) {
  return cfg.scheme == Scheme::CR1 ? cr_bilinear() : ipg_bilinear(cfg.theta, cfg.eta);
}

LinearForm discrete_linear(const ProblemSpec& p, const MethodConfig& cfg) {
  return cfg.scheme == Scheme::CR1 ? cr_linear(p) : ipg_linear(p, cfg.theta, cfg.eta);
}

SparseMatrix assemble_matrix(const ProblemSpec& p, const DiscreteSpace& s, const BilinearForm& form,
                             int degree) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(s.ndof()) * s.local_size() * 4);
  BasisSource basis(s);
  sweep(p, s.mesh(), form, basis, basis, degree,
        [&](int i, int j, double v) { trips.emplace_back(i, j, v); });
  SparseMatrix A(s.ndof(), s.ndof());
  A.setFromTriplets(trips.begin(), trips.end());
  A.prune(0.0);
  A.makeCompressed();
  return A;
}

Eigen::VectorXd assemble_vector(const ProblemSpec& p, const DiscreteSpace& s, const LinearForm& form,
                                int degree) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s.ndof());
  BasisSource basis(s);
  sweep(p, s.mesh(), form, basis, degree, [&](int i, double v) { b[i] += v; });
  return b;
}

SparseSystem assemble_cr(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s) {
  if (s.kind() != SpaceKind::CR1 || &s.mesh() != &m)
    throw Error(ErrorCode::InvalidConfig, "assemble_cr needs a CR1 space on the given mesh");
  for (const auto& f : m.faces()) {
    if (f.kind != FaceKind::Gamma3) continue;
    Vec2 x = m.midpoint(f.id);
    if (std::abs(p.g3(x, f.normal)) > 1e-12)
      throw Error(ErrorCode::InvalidConfig, "the CR1 scheme needs homogeneous Dirichlet data");
  }
  const int deg = s.assembly_degree();
  return {assemble_matrix(p, s, cr_bilinear(), deg), assemble_vector(p, s, cr_linear(p), deg)};
}

SparseSystem assemble_ipg(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg) {
  if (s.kind() != SpaceKind::BrokenPk || &s.mesh() != &m)
    throw Error(ErrorCode::InvalidConfig, "assemble_ipg needs a broken space on the given mesh");
  if (cfg.scheme != Scheme::IPG) throw Error(ErrorCode::InvalidConfig, "method is not IPG");
  const int deg = s.assembly_degree();
  return {assemble_matrix(p, s, ipg_bilinear(cfg.theta, cfg.eta), deg),
          assemble_vector(p, s, ipg_linear(p, cfg.theta, cfg.eta), deg)};
}

SparseSystem assemble(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg) {
  return cfg.scheme == Scheme::CR1 ? assemble_cr(p, m, s) : assemble_ipg(p, m, s, cfg);
}

SparseSystem assemble_adjoint(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                              const MethodConfig& cfg, const ScalarField& g) {
  SparseSystem primal = assemble(p, m, s, cfg);
  SparseSystem adj;
  adj.matrix = SparseMatrix(primal.matrix.transpose());
  adj.matrix.makeCompressed();
  adj.rhs = assemble_vector(p, s, source_load(g), s.assembly_degree());
  return adj;
}

Eigen::VectorXd residual_of_exact(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                                  const MethodConfig& cfg) {
  if (!p.exact) throw Error(ErrorCode::MissingExactSolution, "residual_of_exact needs an exact solution");
  const int deg = analysis_degree(s);
  Eigen::VectorXd r = -assemble_vector(p, s, discrete_linear(p, cfg), deg);
  FieldSource u;
  u.add(*p.exact);
  BasisSource basis(s);
  sweep(p, m, discrete_bilinear(cfg), u, basis, deg, [&](int i, int, double v) { r[i] += v; });
  return r;
}

Eigen::VectorXd adjoint_residual(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                                 const MethodConfig& cfg) {
  if (!p.adjoint) throw Error(ErrorCode::MissingExactSolution, "adjoint_residual needs an adjoint solution");
  const int deg = analysis_degree(s);
  Eigen::VectorXd r = -assemble_vector(p, s, source_load(p.adjoint->g), deg);
  FieldSource v;
  v.add(p.adjoint->v);
  BasisSource basis(s);
  sweep(p, m, discrete_bilinear(cfg), basis, v, deg, [&](int, int j, double val) { r[j] += val; });
  return r;
}

namespace {

// Largest h_F ||v||_F^2 / ||v||_K^2 over P_k on one triangle.
double element_trace_constant_sq(const std::array<Vec2, 3>& p, int k) {
  const int n = pk_dim(k);
  const TriangleRule& tri = triangle_rule(2 * k);
  const LineRule& line = line_rule(2 * k);
  Vec2 e1 = p[1] - p[0], e2 = p[2] - p[0];
  double area = 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());

  std::vector<double> vals(n);
  Eigen::MatrixXd MK = Eigen::MatrixXd::Zero(n, n);
  for (size_t q = 0; q < tri.points.size(); ++q) {
    pk_basis(k, reference_to_bary(tri.points[q]), vals.data(), nullptr);
    double w = 2.0 * area * tri.weights[q];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) MK(i, j) += w * vals[i] * vals[j];
  }
  double best = 0.0;
  for (int face = 0; face < 3; ++face) {
    int a = (face + 1) % 3, b = (face + 2) % 3;
    double hF = (p[b] - p[a]).norm();
    Eigen::MatrixXd MF = Eigen::MatrixXd::Zero(n, n);
    for (size_t q = 0; q < line.points.size(); ++q) {
      Bary lam = Bary::Zero();
      lam[a] = 1.0 - line.points[q];
      lam[b] = line.points[q];
      pk_basis(k, lam, vals.data(), nullptr);
      double w = hF * line.weights[q];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) MF(i, j) += w * vals[i] * vals[j];
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(MF, MK, Eigen::EigenvaluesOnly);
    best = std::max(best, hF * ges.eigenvalues().maxCoeff());
  }
  return best;
}

}  // namespace

double estimate_trace_constant(const Mesh& m, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "trace constant needs k >= 0");
  // similarity class: sorted edge lengths relative to the longest, rounded
  std::map<std::tuple<long, long>, double> seen;
  double best = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    auto p = m.corners(t);
    double l[3] = {(p[1] - p[2]).norm(), (p[2] - p[0]).norm(), (p[0] - p[1]).norm()};
    std::sort(l, l + 3);
    auto key = std::make_tuple(std::lround(l[0] / l[2] * 1e9), std::lround(l[1] / l[2] * 1e9));
    auto it = seen.find(key);
    if (it == seen.end()) it = seen.emplace(key, element_trace_constant_sq(p, k)).first;
    best = std::max(best, it->second);
  }
  return std::sqrt(best);
}

StabilityAdvice stability_advisory(const ProblemSpec& p, const Mesh& m, const MethodConfig& cfg) {
  StabilityAdvice adv;
  adv.trace_constant = estimate_trace_constant(m, cfg.degree - 1);
  const TriangleRule& rule = triangle_rule(4);
  for (int t = 0; t < m.num_triangles(); ++t) {
    auto c = m.corners(t);
    for (const auto& q : rule.points) {
      Vec2 x = c[0] + q.x() * (c[1] - c[0]) + q.y() * (c[2] - c[0]);
      Eigen::SelfAdjointEigenSolver<Mat2> es(p.K(x), Eigen::EigenvaluesOnly);
      adv.k_inf = std::max(adv.k_inf, es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  adv.eta_min = (1.0 - cfg.theta) * 3.0 * adv.trace_constant * adv.trace_constant * adv.k_inf / 4.0;
  adv.satisfied = cfg.theta == 1 ? cfg.eta > 0.0 : cfg.eta > adv.eta_min;
  std::ostringstream os;
  if (adv.satisfied) {
    os << "eta = " << cfg.eta << " satisfies the coercivity bound (> " << adv.eta_min << ")";
  } else {
    os << "warning: eta = " << cfg.eta << " is below the coercivity bound " << adv.eta_min
       << " (C_tr = " << adv.trace_constant << ", |K| = " << adv.k_inf << ")";
  }
  adv.message = os.str();
  return adv;
}

double auto_eta(const ProblemSpec& p, const Mesh& m, int theta, int degree) {
  MethodConfig cfg = MethodConfig::ipg(theta == 1 ? 0 : theta, 1.0, degree);
  return 2.0 * stability_advisory(p, m, cfg).eta_min;
}

}  // namespace ncfem
