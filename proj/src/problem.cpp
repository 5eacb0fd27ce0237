#include "ncfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ncfem/error.hpp"
#include "ncfem/quadrature.hpp"

namespace ncfem {

const char* to_string(Scheme s) { return s == Scheme::CR1 ? "CR1" : "IPG"; }

std::string CoercivityMode::describe() const {
  if (kind == Kind::DirichletMeasure) return "DirichletMeasure";
  std::ostringstream os;
  os << "ReactionLowerBound(" << r0 << ")";
  return os.str();
}

ProblemSpec default_problem() {
  ProblemSpec p;
  p.K = [](const Vec2&) { return Mat2::Identity(); };
  p.c = [](const Vec2&) { return Vec2::Zero(); };
  p.div_c = constant_field(0.0);
  p.r = constant_field(0.0);
  p.f = constant_field(0.0);
  p.alpha = constant_boundary_field(0.0);
  p.g1 = constant_boundary_field(0.0);
  p.g2 = constant_boundary_field(0.0);
  p.g3 = constant_boundary_field(0.0);
  p.k0 = 1.0;
  p.layout = uniform_layout(BoundaryTag::Gamma3);
  p.mode = CoercivityMode::dirichlet_measure();
  return p;
}

ScalarField make_source(const MatrixField& K, const MatrixDivergence& div_K, const VectorField& c,
                        const ScalarField& div_c, const ScalarField& r, const ManufacturedSolution& u) {
  return [=](const Vec2& x) {
    Vec2 g = u.grad(x);
    double diffusion = -div_K(x).dot(g) - K(x).cwiseProduct(u.hess(x)).sum();
    return diffusion + div_c(x) * u.u(x) + c(x).dot(g) + r(x) * u.u(x);
  };
}

ScalarField make_adjoint_source(const MatrixField& K, const MatrixDivergence& div_K,
                                const VectorField& c, const ScalarField& r,
                                const ManufacturedSolution& v) {
  return [=](const Vec2& x) {
    Vec2 g = v.grad(x);
    return -div_K(x).dot(g) - K(x).cwiseProduct(v.hess(x)).sum() - c(x).dot(g) + r(x) * v.u(x);
  };
}

ProblemSpec derive_boundary_data(ProblemSpec p) {
  if (!p.exact) throw Error(ErrorCode::MissingExactSolution, "derive_boundary_data needs an exact solution");
  const ManufacturedSolution ex = *p.exact;
  auto K = p.K;
  auto c = p.c;
  auto alpha = p.alpha;
  auto flux = [=](const Vec2& x, const Vec2& n) { return (K(x) * ex.grad(x) - c(x) * ex.u(x)).dot(n); };
  p.g1 = flux;
  p.g2 = [=](const Vec2& x, const Vec2& n) { return flux(x, n) + alpha(x, n) * ex.u(x); };
  p.g3 = [=](const Vec2& x, const Vec2&) { return ex.u(x); };
  return p;
}

void require_homogeneous_dirichlet(const ProblemSpec& p, const Mesh& m, double tol) {
  for (const auto& f : m.faces()) {
    if (f.kind != FaceKind::Gamma3) continue;
    Vec2 x = m.midpoint(f.id);
    double g = p.exact ? p.exact->u(x) : p.g3(x, f.normal);
    if (std::abs(g) > tol) {
      std::ostringstream os;
      os << "Dirichlet value " << g << " at (" << x.x() << ", " << x.y()
         << ") is nonzero; the CR1 path needs u = 0 on Gamma3";
      throw Error(ErrorCode::InvalidManufacturedSolution, os.str());
    }
  }
}

const ConditionResult* AuditReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

std::string AuditReport::format() const {
  std::ostringstream os;
  for (const auto& c : conditions) {
    os << (c.pass ? "  ok   " : "  FAIL ") << c.name;
    if (!c.counts) os << " (informational)";
    if (c.samples > 0) {
      os << "  [samples " << c.samples << ", worst margin " << c.worst_value << " at ("
         << c.worst_point.x() << ", " << c.worst_point.y() << ")]";
    }
    os << '\n';
  }
  os << (pass ? "audit: pass" : "audit: FAIL") << '\n';
  return os.str();
}

namespace {

constexpr double kSlack = -1e-12;

struct Tracker {
  ConditionResult res;
  explicit Tracker(const char* name) {
    res.name = name;
    res.worst_value = std::numeric_limits<double>::infinity();
  }
  void sample(double margin, const Vec2& x) {
    ++res.samples;
    if (margin < res.worst_value) {
      res.worst_value = margin;
      res.worst_point = x;
    }
    if (margin < kSlack) res.pass = false;
  }
  ConditionResult done() {
    if (res.samples == 0) res.worst_value = 0.0;
    return res;
  }
};

double min_eigenvalue(const Mat2& A) {
  double a = A(0, 0), d = A(1, 1), b = 0.5 * (A(0, 1) + A(1, 0));
  double mean = 0.5 * (a + d);
  double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return mean - rad;
}

}  // namespace

AuditReport audit_conditions(const ProblemSpec& p, const Mesh& m, const CoercivityMode& mode,
                             Scheme scheme) {
  Tracker ellip(condition::kEllipticity), react(condition::kReaction), inflow(condition::kInflowRobin),
      robin(condition::kRobin), neumann(condition::kNeumann), outflow(condition::kDirichletOutflow);
  Tracker bound(condition::kReactionBound);

  const TriangleRule& tri = triangle_rule(4);
  for (int t = 0; t < m.num_triangles(); ++t) {
    auto v = m.corners(t);
    for (const auto& q : tri.points) {
      Vec2 x = v[0] + q.x() * (v[1] - v[0]) + q.y() * (v[2] - v[0]);
      ellip.sample(min_eigenvalue(p.K(x)) - p.k0, x);
      double s = p.r(x) + 0.5 * p.div_c(x);
      react.sample(s, x);
      if (mode.kind == CoercivityMode::Kind::ReactionLowerBound) bound.sample(s - mode.r0, x);
    }
  }

  const LineRule& line = line_rule(5);
  for (const auto& f : m.faces()) {
    if (!f.is_boundary()) continue;
    const Vec2 a = m.vertex(f.endpoints[0]), b = m.vertex(f.endpoints[1]);
    std::vector<double> params = line.points;
    params.push_back(0.5);
    for (double s : params) {
      Vec2 x = a + s * (b - a);
      const Vec2& n = f.normal;
      double nc = n.dot(p.c(x));
      switch (f.kind) {
        case FaceKind::Gamma1: neumann.sample(-nc, x); break;
        case FaceKind::Gamma3: outflow.sample(-nc, x); break;
        case FaceKind::Gamma21: inflow.sample(nc, x); break;
        case FaceKind::Gamma22: robin.sample(p.alpha(x, n) - 0.5 * nc, x); break;
        case FaceKind::Gamma2: {
          double al = p.alpha(x, n);
          if (std::abs(al - nc) <= 1e-12) inflow.sample(nc, x);
          else robin.sample(al - 0.5 * nc, x);
          break;
        }
        default: break;
      }
    }
  }

  AuditReport rep;
  rep.conditions.push_back(ellip.done());
  rep.conditions.push_back(react.done());
  rep.conditions.push_back(inflow.done());
  rep.conditions.push_back(robin.done());
  rep.conditions.push_back(neumann.done());
  ConditionResult out = outflow.done();
  out.counts = scheme == Scheme::IPG;
  rep.conditions.push_back(out);

  if (mode.kind == CoercivityMode::Kind::DirichletMeasure) {
    ConditionResult dm;
    dm.name = condition::kDirichletMeasure;
    double len = 0.0;
    for (const auto& f : m.faces())
      if (f.kind == FaceKind::Gamma3) len += f.length;
    dm.pass = len > 0.0;
    dm.worst_value = len;
    rep.conditions.push_back(dm);
  } else {
    ConditionResult b = bound.done();
    b.pass = b.pass && mode.r0 > 0.0;
    rep.conditions.push_back(b);
  }

  rep.pass = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                         [](const ConditionResult& c) { return c.pass || !c.counts; });
  return rep;
}

}  // namespace ncfem
