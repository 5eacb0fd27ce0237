#include "ncfem/analysis.hpp"

#include <cmath>
#include <random>

#include "ncfem/error.hpp"

namespace ncfem {

namespace {

const ManufacturedSolution& exact_of(const ProblemSpec& p) {
  if (!p.exact) throw Error(ErrorCode::MissingExactSolution, "problem '" + p.name + "' has no exact solution");
  return *p.exact;
}

// v_i = form(w, phi_i) for a single-field trial source.
Eigen::VectorXd apply_to_basis(const ProblemSpec& p, const DiscreteSpace& s, const BilinearForm& form,
                               const TraceSource& w, int degree) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.ndof());
  BasisSource basis(s);
  sweep(p, s.mesh(), form, w, basis, degree, [&](int i, int, double v) { out[i] += v; });
  return out;
}

}  // namespace

double field_norm(const ProblemSpec& p, const Mesh& m, const TraceSource& w, NormKind kind, double eta,
                  int degree) {
  return std::max(0.0, evaluate(p, m, norm_form(kind, eta), w, w, degree));
}

ErrorSummary error_norms(const ProblemSpec& p, const FeFunction& uh, const MethodConfig& cfg) {
  const DiscreteSpace& s = *uh.space;
  const Mesh& m = s.mesh();
  FieldSource e;
  e.add(exact_of(p)).add(uh, -1.0);
  const int deg = analysis_degree(s);
  ErrorSummary out;
  out.l2 = std::sqrt(field_norm(p, m, e, NormKind::L2, cfg.eta, deg));
  out.broken_h1 = std::sqrt(field_norm(p, m, e, NormKind::BrokenH1Semi, cfg.eta, deg));
  if (cfg.scheme == Scheme::IPG) out.energy = std::sqrt(field_norm(p, m, e, NormKind::EnergyVh, cfg.eta, deg));
  return out;
}

NormKind test_norm(const MethodConfig& cfg) {
  return cfg.scheme == Scheme::CR1 ? NormKind::BrokenH1Semi : NormKind::EnergyVh;
}

NormKind extended_norm(const MethodConfig& cfg) {
  return cfg.scheme == Scheme::CR1 ? NormKind::BrokenH1Semi : NormKind::ExtendedVh;
}

double consistency_norm(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg) {
  Eigen::VectorXd r = residual_of_exact(p, m, s, cfg);
  return DualNorm(gram(s, test_norm(cfg), p, cfg).matrix)(r);
}

BestApproximation best_approximation(const ProblemSpec& p, const DiscreteSpace& s, NormKind kind,
                                     const MethodConfig& cfg) {
  const int deg = analysis_degree(s);
  const BilinearForm form = norm_form(kind, cfg.eta);
  SparseMatrix M = assemble_matrix(p, s, form, deg);
  FieldSource u;
  u.add(exact_of(p));
  Eigen::VectorXd b = apply_to_basis(p, s, form, u, deg);

  BestApproximation out;
  out.w = FeFunction(s, DualNorm(M).riesz(b));
  FieldSource diff;
  diff.add(exact_of(p)).add(out.w, -1.0);
  out.distance = std::sqrt(field_norm(p, s.mesh(), diff, kind, cfg.eta, deg));
  return out;
}

StrangReport strang_bound(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg,
                          const SparseMatrix& A, const FeFunction& uh, std::uint64_t seed, int dense_limit) {
  const NormKind vn = test_norm(cfg), un = extended_norm(cfg);
  const int deg = analysis_degree(s);
  StrangReport rep;

  SparseMatrix GV = gram(s, vn, p, cfg).matrix;
  SparseMatrix GU = un == vn ? GV : gram(s, un, p, cfg).matrix;
  DualNorm dual_v(GV);
  rep.alpha = inf_sup(A, GV, GV, dense_limit);

  BestApproximation best = best_approximation(p, s, un, cfg);
  rep.approx_ext = best.distance;
  FieldSource d;
  d.add(exact_of(p)).add(best.w, -1.0);
  rep.approx = std::sqrt(field_norm(p, m, d, vn, cfg.eta, deg));
  rep.consistency = dual_v(residual_of_exact(p, m, s, cfg));

  FieldSource e;
  e.add(exact_of(p)).add(uh, -1.0);
  rep.error = std::sqrt(field_norm(p, m, e, vn, cfg.eta, deg));

  // a_h(d, phi_i) and <d, phi_i>_U for the continuous direction d = u - w*
  Eigen::VectorXd bd = apply_to_basis(p, s, discrete_bilinear(cfg), d, deg);
  Eigen::VectorXd cd = apply_to_basis(p, s, norm_form(un, cfg.eta), d, deg);
  const double n1 = rep.approx_ext;
  const bool has_direction = n1 > 1e-14;
  if (has_direction) rep.m_direction = dual_v(bd) / n1;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  Eigen::VectorXd z(s.ndof());
  for (int sample = 0; sample < 200; ++sample) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    double t = uniform(rng);
    double n2 = std::sqrt(z.dot(GU * z));
    Eigen::VectorXd b = (A * z) / n2;
    double w2 = 1.0;
    if (has_direction) {
      b += (t / n1) * bd;
      w2 += t * t + 2.0 * t / (n1 * n2) * cd.dot(z);
    }
    if (w2 <= 0.0) continue;
    rep.m_sampled = std::max(rep.m_sampled, dual_v(b) / std::sqrt(w2));
  }
  rep.m_tilde = 1.5 * std::max(rep.m_sampled, rep.m_direction);
  if (rep.alpha > 0.0) {
    rep.bound = rep.m_tilde / rep.alpha * rep.approx_ext + rep.approx + rep.consistency / rep.alpha;
  } else {
    rep.bound = std::numeric_limits<double>::infinity();
  }
  return rep;
}

double DualityReport::relative_gap() const {
  double scale = std::abs(pairing) + std::abs(term1) + std::abs(term2) + std::abs(term3) + std::abs(term4);
  return scale > 0.0 ? reconstruction_gap / scale : reconstruction_gap;
}

DualityReport aubin_nitsche(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s, const MethodConfig& cfg,
                            const FeFunction& uh, const FeFunction& vh) {
  const ManufacturedSolution& u = exact_of(p);
  if (!p.adjoint) throw Error(ErrorCode::MissingExactSolution, "problem '" + p.name + "' has no adjoint solution");
  const ManufacturedSolution& v = p.adjoint->v;
  const int deg = analysis_degree(s);
  const BilinearForm ah = discrete_bilinear(cfg), a = continuous_bilinear();
  const LinearForm lh = discrete_linear(p, cfg), l = continuous_linear(p);

  FieldSource err, dv, us, vs;
  err.add(u).add(uh, -1.0);
  dv.add(v).add(vh, -1.0);
  us.add(u);
  vs.add(v);

  DualityReport r;
  r.pairing = evaluate(p, m, source_load(p.adjoint->g), err, deg);
  r.term1 = evaluate(p, m, ah, err, dv, deg);
  r.term2 = -(evaluate(p, m, ah, err, vs, deg) - r.pairing);
  r.term3 = -(evaluate(p, m, ah, us, dv, deg) - evaluate(p, m, lh, dv, deg));
  double ah_uv = evaluate(p, m, ah, us, vs, deg);
  double a_uv = evaluate(p, m, a, us, vs, deg);
  r.a_minus_ah = a_uv - ah_uv;
  r.term4 = (ah_uv - a_uv) - (evaluate(p, m, lh, vs, deg) - evaluate(p, m, l, vs, deg));
  r.reconstruction_gap = std::abs(r.pairing - (r.term1 + r.term2 + r.term3 + r.term4));
  return r;
}

double adjoint_consistency_norm(const ProblemSpec& p, const Mesh& m, const DiscreteSpace& s,
                                const MethodConfig& cfg) {
  Eigen::VectorXd r = adjoint_residual(p, m, s, cfg);
  return DualNorm(gram(s, test_norm(cfg), p, cfg).matrix)(r);
}

std::vector<std::optional<double>> rates(const std::vector<std::pair<double, double>>& rows) {
  std::vector<std::optional<double>> out;
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    auto [h0, v0] = rows[i];
    auto [h1, v1] = rows[i + 1];
    if (!(v0 > 0.0) || !(v1 > 0.0) || !(h0 > 0.0) || !(h1 > 0.0) || h0 == h1) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(std::log(v0 / v1) / std::log(h0 / h1));
    }
  }
  return out;
}

}  // namespace ncfem
