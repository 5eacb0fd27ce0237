#include "ncfem/fespace.hpp"

#include <Eigen/Dense>

#include "ncfem/error.hpp"
#include "ncfem/quadrature.hpp"

namespace ncfem {

namespace {

std::vector<std::array<Vec2, 3>> barycentric_gradients(const Mesh& m) {
  std::vector<std::array<Vec2, 3>> out(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    auto p = m.corners(t);
    Mat2 J;
    J.col(0) = p[1] - p[0];
    J.col(1) = p[2] - p[0];
    Mat2 JinvT = J.inverse().transpose();
    Vec2 g1 = JinvT.col(0), g2 = JinvT.col(1);
    out[t] = {-g1 - g2, g1, g2};
  }
  return out;
}

}  // namespace

DiscreteSpace DiscreteSpace::cr1(const Mesh& m) {
  DiscreteSpace s;
  s.kind_ = SpaceKind::CR1;
  s.degree_ = 1;
  s.mesh_ = &m;
  s.nloc_ = 3;
  s.face_dofs_.assign(m.num_faces(), -1);
  for (const auto& f : m.faces())
    if (f.kind != FaceKind::Gamma3) s.face_dofs_[f.id] = s.ndof_++;
  s.element_dofs_.resize(3 * static_cast<size_t>(m.num_triangles()));
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) s.element_dofs_[3 * t + i] = s.face_dofs_[m.element_face(t, i)];
  for (int i = 0; i < 3; ++i) {
    Bary mid = Bary::Constant(0.5);
    mid[i] = 0.0;
    s.nodes_.push_back(mid);
  }
  s.grad_lambda_ = barycentric_gradients(m);
  return s;
}

DiscreteSpace DiscreteSpace::broken(const Mesh& m, int k) {
  if (k < 1 || k > 4) throw Error(ErrorCode::UnsupportedDegree, "broken spaces support degree 1..4");
  DiscreteSpace s;
  s.kind_ = SpaceKind::BrokenPk;
  s.degree_ = k;
  s.mesh_ = &m;
  for (int a2 = 0; a2 <= k; ++a2)
    for (int a1 = 0; a1 <= k - a2; ++a1) s.nodes_.push_back(Bary(k - a1 - a2, a1, a2) / k);
  s.nloc_ = pk_dim(k);
  s.ndof_ = s.nloc_ * m.num_triangles();
  s.element_dofs_.resize(static_cast<size_t>(s.ndof_));
  for (int i = 0; i < s.ndof_; ++i) s.element_dofs_[i] = i;
  s.grad_lambda_ = barycentric_gradients(m);
  return s;
}

void DiscreteSpace::reference_basis(const Bary& lam, double* values, Eigen::Vector3d* dlam) const {
  if (kind_ == SpaceKind::CR1) {
    for (int i = 0; i < 3; ++i) {
      values[i] = 1.0 - 2.0 * lam[i];
      if (dlam) {
        dlam[i].setZero();
        dlam[i][i] = -2.0;
      }
    }
    return;
  }
  pk_basis(degree_, lam, values, dlam);
}

Vec2 DiscreteSpace::to_physical(int t, const Bary& lam) const {
  auto p = mesh_->corners(t);
  return lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
}

Bary face_point_lambda(const Mesh& m, int t, const Face& f, double s) {
  const auto& tri = m.triangles()[t];
  Bary lam = Bary::Zero();
  for (int i = 0; i < 3; ++i) {
    if (tri[i] == f.endpoints[0]) lam[i] += 1.0 - s;
    if (tri[i] == f.endpoints[1]) lam[i] += s;
  }
  return lam;
}

Bary reference_to_bary(const Vec2& ref) { return Bary(1.0 - ref.x() - ref.y(), ref.x(), ref.y()); }

void pk_basis(int k, const Bary& lam, double* values, Eigen::Vector3d* dlam) {
  // phi_a = prod_m prod_{l < a_m} (k lambda_m - l) / (l + 1)
  int b = 0;
  for (int a2 = 0; a2 <= k; ++a2) {
    for (int a1 = 0; a1 <= k - a2; ++a1, ++b) {
      const int a[3] = {k - a1 - a2, a1, a2};
      double f[3], df[3];
      for (int m = 0; m < 3; ++m) {
        double val = 1.0, der = 0.0;
        for (int l = 0; l < a[m]; ++l) {
          double factor = (k * lam[m] - l) / (l + 1.0);
          der = der * factor + val * k / (l + 1.0);
          val *= factor;
        }
        f[m] = val;
        df[m] = der;
      }
      values[b] = f[0] * f[1] * f[2];
      if (dlam) dlam[b] = Eigen::Vector3d(df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]);
    }
  }
}

FeFunction::FeFunction(const DiscreteSpace& s, Eigen::VectorXd c) : space(&s), coeffs(std::move(c)) {
  if (coeffs.size() != s.ndof()) throw Error(ErrorCode::InvalidArgument, "coefficient length does not match ndof");
}

PointValue eval_bary(const FeFunction& fn, int t, const Bary& lambda) {
  const DiscreteSpace& s = *fn.space;
  if (t < 0 || t >= s.mesh().num_triangles()) throw Error(ErrorCode::InvalidArgument, "element out of range");
  const int n = s.local_size();
  double vals[15];
  Eigen::Vector3d dl[15];
  s.reference_basis(lambda, vals, dl);
  const auto& gl = s.lambda_gradients(t);
  PointValue out;
  for (int i = 0; i < n; ++i) {
    int d = s.dof(t, i);
    if (d < 0) continue;
    double c = fn.coeffs[d];
    out.value += c * vals[i];
    out.grad += c * (dl[i][0] * gl[0] + dl[i][1] * gl[1] + dl[i][2] * gl[2]);
  }
  return out;
}

PointValue eval(const FeFunction& fn, int t, const Vec2& ref) { return eval_bary(fn, t, reference_to_bary(ref)); }

FeFunction interpolate(const DiscreteSpace& s, const ScalarField& u) {
  FeFunction out(s);
  const Mesh& m = s.mesh();
  if (s.kind() == SpaceKind::CR1) {
    for (const auto& f : m.faces()) {
      int d = s.face_dof(f.id);
      if (d >= 0) out.coeffs[d] = u(m.midpoint(f.id));
    }
    return out;
  }
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int i = 0; i < s.local_size(); ++i) out.coeffs[s.dof(t, i)] = u(s.to_physical(t, s.local_nodes()[i]));
  return out;
}

FeFunction elementwise_l2_projection(const DiscreteSpace& s, const ScalarField& u, int quad_degree) {
  if (s.kind() != SpaceKind::BrokenPk)
    throw Error(ErrorCode::InvalidArgument, "elementwise projection needs a broken space");
  FeFunction out(s);
  const Mesh& m = s.mesh();
  const TriangleRule& rule = triangle_rule(quad_degree);
  const int n = s.local_size();
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd b(n);
  double vals[15];
  for (int t = 0; t < m.num_triangles(); ++t) {
    M.setZero();
    b.setZero();
    double jac = 2.0 * std::abs(m.area(t));
    for (size_t q = 0; q < rule.points.size(); ++q) {
      Bary lam = reference_to_bary(rule.points[q]);
      s.reference_basis(lam, vals, nullptr);
      double w = rule.weights[q] * jac;
      double uq = u(s.to_physical(t, lam));
      for (int i = 0; i < n; ++i) {
        b[i] += w * uq * vals[i];
        for (int j = 0; j < n; ++j) M(i, j) += w * vals[i] * vals[j];
      }
    }
    Eigen::VectorXd c = M.llt().solve(b);
    for (int i = 0; i < n; ++i) out.coeffs[s.dof(t, i)] = c[i];
  }
  return out;
}

ScalarJump jump_average(const Vec2& nu, double v_owner, std::optional<double> v_neighbor) {
  if (!v_neighbor) return {v_owner * nu, v_owner};
  return {(v_owner - *v_neighbor) * nu, 0.5 * (v_owner + *v_neighbor)};
}

VectorJump jump_average(const Vec2& nu, const Vec2& p_owner, std::optional<Vec2> p_neighbor) {
  if (!p_neighbor) return {p_owner.dot(nu), p_owner};
  return {(p_owner - *p_neighbor).dot(nu), 0.5 * (p_owner + *p_neighbor)};
}

}  // namespace ncfem
