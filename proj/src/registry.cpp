#include "ncfem/registry.hpp"

#include <cmath>
#include <numbers>

#include "ncfem/error.hpp"

namespace ncfem {

namespace {

constexpr double pi = std::numbers::pi;

MatrixField diag_field(ScalarField a, ScalarField b) {
  return [=](const Vec2& x) {
    Mat2 K = Mat2::Zero();
    K(0, 0) = a(x);
    K(1, 1) = b(x);
    return K;
  };
}

ProblemSpec poisson_dirichlet() {
  ProblemSpec p = default_problem();
  p.name = "P1";
  p.description = "Poisson, homogeneous Dirichlet, u = sin(pi x) sin(pi y)";
  ManufacturedSolution u;
  u.u = [](const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  u.grad = [](const Vec2& x) {
    return Vec2(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  u.hess = [](const Vec2& x) {
    double ss = std::sin(pi * x.x()) * std::sin(pi * x.y());
    double cc = std::cos(pi * x.x()) * std::cos(pi * x.y());
    Mat2 H;
    H << -ss, cc, cc, -ss;
    return Mat2(pi * pi * H);
  };
  p.exact = u;
  p.f = make_source(p.K, [](const Vec2&) { return Vec2::Zero(); }, p.c, p.div_c, p.r, u);
  p.layout = uniform_layout(BoundaryTag::Gamma3);
  p.mode = CoercivityMode::dirichlet_measure();
  return derive_boundary_data(p);
}

// Coefficients shared by the mixed-boundary problems.
void mixed_coefficients(ProblemSpec& p) {
  p.K = diag_field([](const Vec2& x) { return 1.0 + x.x() * x.x(); }, constant_field(1.0));
  p.c = [](const Vec2&) { return Vec2(0.5, 0.5); };
  p.div_c = constant_field(0.0);
  p.r = constant_field(1.0);
  p.k0 = 1.0;
  p.mode = CoercivityMode::reaction_lower_bound(1.0);
}

ManufacturedSolution exp_cos_solution() {
  ManufacturedSolution u;
  u.u = [](const Vec2& x) { return (1.0 - x.x()) * std::exp(x.x()) * std::cos(x.y()); };
  u.grad = [](const Vec2& x) {
    double e = std::exp(x.x());
    return Vec2(-x.x() * e * std::cos(x.y()), -(1.0 - x.x()) * e * std::sin(x.y()));
  };
  u.hess = [](const Vec2& x) {
    double e = std::exp(x.x()), cy = std::cos(x.y()), sy = std::sin(x.y());
    Mat2 H;
    H << -(1.0 + x.x()) * e * cy, x.x() * e * sy, x.x() * e * sy, -(1.0 - x.x()) * e * cy;
    return H;
  };
  return u;
}

VectorField div_K_mixed() {
  return [](const Vec2& x) { return Vec2(2.0 * x.x(), 0.0); };
}

ProblemSpec mixed_cr() {
  ProblemSpec p = default_problem();
  p.name = "P2";
  p.description =
      "diffusion-convection-reaction, K = diag(1+x^2, 1), c = (1/2, 1/2), r = 1; "
      "Neumann left, Robin (alpha = 2) top and bottom, Dirichlet right";
  mixed_coefficients(p);
  p.alpha = constant_boundary_field(2.0);
  p.exact = exp_cos_solution();
  p.f = make_source(p.K, div_K_mixed(), p.c, p.div_c, p.r, *p.exact);
  p.layout = side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma3, BoundaryTag::Gamma2, BoundaryTag::Gamma2);
  return derive_boundary_data(p);
}

// Robin coefficient equal to nu.c on the top side, so the top becomes Gamma21.
BoundaryField top_inflow_alpha(double top, double other) {
  return [=](const Vec2&, const Vec2& n) { return n.y() > 0.5 ? top : other; };
}

ProblemSpec mixed_dg() {
  ProblemSpec p = default_problem();
  p.name = "P2dg";
  p.description =
      "P2 coefficients with inflow Dirichlet bottom, Neumann left, "
      "Robin top (alpha = nu.c) and right (alpha = 2)";
  mixed_coefficients(p);
  p.alpha = top_inflow_alpha(0.5, 2.0);
  p.exact = exp_cos_solution();
  p.f = make_source(p.K, div_K_mixed(), p.c, p.div_c, p.r, *p.exact);
  p.layout = side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma2, BoundaryTag::Gamma3, BoundaryTag::Gamma2);
  return derive_boundary_data(p);
}

// Fixed-coefficient polynomial of total degree k.
ManufacturedSolution polynomial_solution(int k) {
  struct Term {
    int px, py;
    double a;
  };
  static const Term all_terms[] = {
      {0, 0, 1.0},  {1, 0, 0.5},  {0, 1, -0.3}, {2, 0, 0.7},  {1, 1, -0.4},
      {0, 2, 0.2},  {3, 0, 0.3},  {2, 1, -0.5}, {0, 3, 0.1},  {1, 2, 0.25},
      {4, 0, 0.2},  {2, 2, -0.3}, {0, 4, 0.15}, {3, 1, 0.1},  {1, 3, -0.2},
  };
  std::vector<Term> terms;
  for (const auto& t : all_terms)
    if (t.px + t.py <= k) terms.push_back(t);

  auto mono = [](double x, int p) { return p <= 0 ? (p == 0 ? 1.0 : 0.0) : std::pow(x, p); };
  ManufacturedSolution u;
  u.u = [=](const Vec2& x) {
    double s = 0.0;
    for (const auto& t : terms) s += t.a * mono(x.x(), t.px) * mono(x.y(), t.py);
    return s;
  };
  u.grad = [=](const Vec2& x) {
    Vec2 g = Vec2::Zero();
    for (const auto& t : terms) {
      g.x() += t.a * t.px * mono(x.x(), t.px - 1) * mono(x.y(), t.py);
      g.y() += t.a * t.py * mono(x.x(), t.px) * mono(x.y(), t.py - 1);
    }
    return g;
  };
  u.hess = [=](const Vec2& x) {
    Mat2 H = Mat2::Zero();
    for (const auto& t : terms) {
      H(0, 0) += t.a * t.px * (t.px - 1) * mono(x.x(), t.px - 2) * mono(x.y(), t.py);
      H(1, 1) += t.a * t.py * (t.py - 1) * mono(x.x(), t.px) * mono(x.y(), t.py - 2);
      double xy = t.a * t.px * t.py * mono(x.x(), t.px - 1) * mono(x.y(), t.py - 1);
      H(0, 1) += xy;
      H(1, 0) += xy;
    }
    return H;
  };
  return u;
}

ProblemSpec polynomial_problem(int k) {
  if (k < 1 || k > 4) throw Error(ErrorCode::UnsupportedDegree, "P3 is defined for degree 1..4");
  ProblemSpec p = default_problem();
  p.name = "P3";
  p.description = "polynomial exact solution of degree k with polynomial coefficients, mixed boundary";
  p.K = diag_field([](const Vec2& x) { return 1.0 + x.x() * x.x(); },
                   [](const Vec2& x) { return 1.0 + x.y(); });
  p.c = [](const Vec2& x) { return Vec2(0.5 + 0.25 * x.x(), 0.5); };
  p.div_c = constant_field(0.25);
  p.r = [](const Vec2& x) { return 1.0 + x.x() * x.y(); };
  p.k0 = 1.0;
  p.alpha = top_inflow_alpha(0.5, 2.0);
  p.exact = polynomial_solution(k);
  p.f = make_source(p.K, [](const Vec2& x) { return Vec2(2.0 * x.x(), 1.0); }, p.c, p.div_c, p.r,
                    *p.exact);
  p.layout = side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma2, BoundaryTag::Gamma3, BoundaryTag::Gamma2);
  p.mode = CoercivityMode::reaction_lower_bound(1.0);
  return derive_boundary_data(p);
}

ProblemSpec adjoint_problem() {
  ProblemSpec p = default_problem();
  p.name = "P4";
  p.description =
      "polynomial primal and adjoint solutions, homogeneous Dirichlet bottom, "
      "Neumann left, Robin (alpha = 1) top and right";
  mixed_coefficients(p);
  p.alpha = constant_boundary_field(1.0);

  ManufacturedSolution u;
  u.u = [](const Vec2& x) { return x.y() * (1.0 + x.x()) * (2.0 - x.y()); };
  u.grad = [](const Vec2& x) {
    return Vec2(x.y() * (2.0 - x.y()), (1.0 + x.x()) * (2.0 - 2.0 * x.y()));
  };
  u.hess = [](const Vec2& x) {
    Mat2 H;
    H << 0.0, 2.0 - 2.0 * x.y(), 2.0 - 2.0 * x.y(), -2.0 * (1.0 + x.x());
    return H;
  };
  p.exact = u;
  p.f = make_source(p.K, div_K_mixed(), p.c, p.div_c, p.r, u);

  // v vanishes on the bottom, has zero conormal derivative on the left, and
  // satisfies K grad v.nu + alpha v = 0 on the top and the right.
  ManufacturedSolution v;
  v.u = [](const Vec2& x) { return (5.0 - x.x() * x.x()) * x.y() * (1.5 - x.y()); };
  v.grad = [](const Vec2& x) {
    return Vec2(-2.0 * x.x() * x.y() * (1.5 - x.y()), (5.0 - x.x() * x.x()) * (1.5 - 2.0 * x.y()));
  };
  v.hess = [](const Vec2& x) {
    double xy = -2.0 * x.x() * (1.5 - 2.0 * x.y());
    Mat2 H;
    H << -2.0 * x.y() * (1.5 - x.y()), xy, xy, -2.0 * (5.0 - x.x() * x.x());
    return H;
  };
  p.adjoint = AdjointData{v, make_adjoint_source(p.K, div_K_mixed(), p.c, p.r, v)};
  p.layout = side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma2, BoundaryTag::Gamma3, BoundaryTag::Gamma2);
  return derive_boundary_data(p);
}

}  // namespace

std::vector<std::string> problem_names() { return {"P1", "P2", "P2dg", "P3", "P4"}; }

ProblemSpec make_problem(const std::string& name, int degree) {
  if (name == "P1") return poisson_dirichlet();
  if (name == "P2") return mixed_cr();
  if (name == "P2dg") return mixed_dg();
  if (name == "P3") return polynomial_problem(degree);
  if (name == "P4") return adjoint_problem();
  throw Error(ErrorCode::ConfigError, "unknown problem '" + name + "'");
}

}  // namespace ncfem
