#include "ncfem/forms.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ncfem/error.hpp"
#include "ncfem/quadrature.hpp"

namespace ncfem {

void BasisSource::element_entries(int t, const Bary& lam, bool neighbor, std::vector<Entry>& out) const {
  double vals[15];
  Eigen::Vector3d dl[15];
  space_.reference_basis(lam, vals, dl);
  const auto& gl = space_.lambda_gradients(t);
  for (int i = 0; i < space_.local_size(); ++i) {
    int d = space_.dof(t, i);
    if (d < 0) continue;
    Entry e;
    e.dof = d;
    Trace& tr = neighbor ? e.N : e.K;
    tr.v = vals[i];
    tr.g = dl[i][0] * gl[0] + dl[i][1] * gl[1] + dl[i][2] * gl[2];
    out.push_back(e);
  }
}

void BasisSource::volume(const VolumeQuery& q, std::vector<Entry>& out) const {
  out.clear();
  element_entries(q.elem, q.lambda, false, out);
}

void BasisSource::face(const FaceQuery& q, std::vector<Entry>& out) const {
  out.clear();
  element_entries(q.face->owner, q.lambda_owner, false, out);
  if (!q.face->is_boundary()) element_entries(q.face->neighbor, q.lambda_neighbor, true, out);
}

FieldSource& FieldSource::add(const ManufacturedSolution& u, double coef) {
  analytic_.emplace_back(&u, coef);
  return *this;
}

FieldSource& FieldSource::add(const FeFunction& u, double coef) {
  discrete_.emplace_back(&u, coef);
  return *this;
}

void FieldSource::volume(const VolumeQuery& q, std::vector<Entry>& out) const {
  Entry e;
  for (const auto& [u, a] : analytic_) {
    e.K.v += a * u->u(q.x);
    e.K.g += a * u->grad(q.x);
  }
  for (const auto& [u, a] : discrete_) {
    PointValue pv = eval_bary(*u, q.elem, q.lambda);
    e.K.v += a * pv.value;
    e.K.g += a * pv.grad;
  }
  out.assign(1, e);
}

void FieldSource::face(const FaceQuery& q, std::vector<Entry>& out) const {
  const bool interior = !q.face->is_boundary();
  Entry e;
  for (const auto& [u, a] : analytic_) {
    double v = a * u->u(q.x);
    Vec2 g = a * u->grad(q.x);
    e.K.v += v;
    e.K.g += g;
    if (interior) {
      e.N.v += v;
      e.N.g += g;
    }
  }
  for (const auto& [u, a] : discrete_) {
    PointValue pk = eval_bary(*u, q.face->owner, q.lambda_owner);
    e.K.v += a * pk.value;
    e.K.g += a * pk.grad;
    if (interior) {
      PointValue pn = eval_bary(*u, q.face->neighbor, q.lambda_neighbor);
      e.N.v += a * pn.value;
      e.N.g += a * pn.grad;
    }
  }
  out.assign(1, e);
}

namespace {

VolumePoint volume_point(const ProblemSpec& p, int t, const Vec2& x, double w) {
  return {t, x, w, p.K(x), p.c(x), p.r(x), p.div_c(x)};
}

FacePoint face_point(const ProblemSpec& p, const Face& f, const Vec2& x, double w) {
  FacePoint fp{&f, x, w, f.normal, f.length, p.K(x), p.c(x), 0.0};
  if (f.is_boundary() && p.alpha) fp.alpha = p.alpha(x, f.normal);
  return fp;
}

template <typename PerFace>
void for_each_face_point(const Mesh& m, int degree, PerFace&& body) {
  const LineRule& line = line_rule(degree);
  for (const auto& f : m.faces()) {
    const Vec2 a = m.vertex(f.endpoints[0]), b = m.vertex(f.endpoints[1]);
    body(f, [&](auto&& at_point) {
      for (size_t q = 0; q < line.points.size(); ++q) {
        double s = line.points[q];
        FaceQuery fq{&f, face_point_lambda(m, f.owner, f, s),
                     f.is_boundary() ? Bary::Zero().eval() : face_point_lambda(m, f.neighbor, f, s),
                     a + s * (b - a)};
        at_point(fq, line.weights[q] * f.length, q == 0);
      }
    });
  }
}

}  // namespace

void sweep(const ProblemSpec& p, const Mesh& m, const BilinearForm& form, const TraceSource& trial,
           const TraceSource& test, int degree, const MatrixSink& sink) {
  std::vector<Entry> we, ze;
  Eigen::MatrixXd local;
  auto flush = [&]() {
    for (size_t i = 0; i < ze.size(); ++i)
      for (size_t j = 0; j < we.size(); ++j) sink(ze[i].dof, we[j].dof, local(i, j));
  };

  if (form.volume) {
    const TriangleRule& rule = triangle_rule(degree);
    for (int t = 0; t < m.num_triangles(); ++t) {
      const double jac = 2.0 * std::abs(m.area(t));
      for (size_t q = 0; q < rule.points.size(); ++q) {
        Bary lam = reference_to_bary(rule.points[q]);
        VolumeQuery vq{t, lam, Vec2::Zero()};
        auto p3 = m.corners(t);
        vq.x = lam[0] * p3[0] + lam[1] * p3[1] + lam[2] * p3[2];
        trial.volume(vq, we);
        test.volume(vq, ze);
        if (q == 0) local.setZero(static_cast<Eigen::Index>(ze.size()), static_cast<Eigen::Index>(we.size()));
        VolumePoint vp = volume_point(p, t, vq.x, rule.weights[q] * jac);
        for (size_t i = 0; i < ze.size(); ++i)
          for (size_t j = 0; j < we.size(); ++j) local(i, j) += vp.weight * form.volume(vp, we[j].K, ze[i].K);
      }
      flush();
    }
  }

  if (!form.interior && !form.boundary) return;
  for_each_face_point(m, degree, [&](const Face& f, auto&& points) {
    const FaceKernel& kernel = f.is_boundary() ? form.boundary : form.interior;
    if (!kernel) return;
    points([&](const FaceQuery& fq, double w, bool first) {
      trial.face(fq, we);
      test.face(fq, ze);
      if (first) local.setZero(static_cast<Eigen::Index>(ze.size()), static_cast<Eigen::Index>(we.size()));
      FacePoint fp = face_point(p, f, fq.x, w);
      for (size_t i = 0; i < ze.size(); ++i)
        for (size_t j = 0; j < we.size(); ++j) local(i, j) += w * kernel(fp, we[j], ze[i]);
    });
    flush();
  });
}

void sweep(const ProblemSpec& p, const Mesh& m, const LinearForm& form, const TraceSource& test,
           int degree, const VectorSink& sink) {
  std::vector<Entry> ze;
  Eigen::VectorXd local;
  auto flush = [&]() {
    for (size_t i = 0; i < ze.size(); ++i) sink(ze[i].dof, local[i]);
  };

  if (form.volume) {
    const TriangleRule& rule = triangle_rule(degree);
    for (int t = 0; t < m.num_triangles(); ++t) {
      const double jac = 2.0 * std::abs(m.area(t));
      auto p3 = m.corners(t);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        Bary lam = reference_to_bary(rule.points[q]);
        VolumeQuery vq{t, lam, lam[0] * p3[0] + lam[1] * p3[1] + lam[2] * p3[2]};
        test.volume(vq, ze);
        if (q == 0) local.setZero(static_cast<Eigen::Index>(ze.size()));
        VolumePoint vp = volume_point(p, t, vq.x, rule.weights[q] * jac);
        for (size_t i = 0; i < ze.size(); ++i) local[i] += vp.weight * form.volume(vp, ze[i].K);
      }
      flush();
    }
  }

  if (!form.interior && !form.boundary) return;
  for_each_face_point(m, degree, [&](const Face& f, auto&& points) {
    const FaceLoad& load = f.is_boundary() ? form.boundary : form.interior;
    if (!load) return;
    points([&](const FaceQuery& fq, double w, bool first) {
      test.face(fq, ze);
      if (first) local.setZero(static_cast<Eigen::Index>(ze.size()));
      FacePoint fp = face_point(p, f, fq.x, w);
      for (size_t i = 0; i < ze.size(); ++i) local[i] += w * load(fp, ze[i]);
    });
    flush();
  });
}

double evaluate(const ProblemSpec& p, const Mesh& m, const BilinearForm& form, const TraceSource& w,
                const TraceSource& z, int degree) {
  long double total = 0.0L;  // extended accumulator keeps small differences of O(1) forms meaningful
  sweep(p, m, form, w, z, degree, [&](int, int, double v) { total += v; });
  return static_cast<double>(total);
}

double evaluate(const ProblemSpec& p, const Mesh& m, const LinearForm& form, const TraceSource& z,
                int degree) {
  long double total = 0.0L;  // extended accumulator keeps small differences of O(1) forms meaningful
  sweep(p, m, form, z, degree, [&](int, double v) { total += v; });
  return static_cast<double>(total);
}

double upwind_value(double c_dot_nu, double w_owner, double w_neighbor, bool boundary) {
  if (c_dot_nu > 0.0) return w_owner;
  return boundary ? 0.0 : w_neighbor;
}

namespace {

double volume_dcr(const VolumePoint& p, const Trace& w, const Trace& z) {
  return (p.K * w.g).dot(z.g) - w.v * p.c.dot(z.g) + p.r * w.v * z.v;
}

double interior_upwind(const FacePoint& p, const Entry& w, const Entry& z) {
  double cn = p.c.dot(p.normal);
  return cn * upwind_value(cn, w.K.v, w.N.v, false) * (z.K.v - z.N.v);
}

double boundary_upwind(const FacePoint& p, const Entry& w, const Entry& z) {
  double cn = p.c.dot(p.normal);
  return cn * upwind_value(cn, w.K.v, 0.0, true) * z.K.v;
}

}  // namespace

BilinearForm cr_bilinear() {
  BilinearForm b;
  b.volume = volume_dcr;
  b.interior = interior_upwind;
  b.boundary = [](const FacePoint& p, const Entry& w, const Entry& z) {
    FaceKind k = p.face->kind;
    if (k == FaceKind::Gamma3) return boundary_upwind(p, w, z);
    if (is_robin(k)) return p.alpha * w.K.v * z.K.v;
    return 0.0;
  };
  return b;
}

LinearForm continuous_linear(const ProblemSpec& p) {
  LinearForm l;
  ScalarField f = p.f;
  BoundaryField g1 = p.g1, g2 = p.g2;
  l.volume = [f](const VolumePoint& vp, const Trace& z) { return f(vp.x) * z.v; };
  l.boundary = [g1, g2](const FacePoint& fp, const Entry& z) {
    FaceKind k = fp.face->kind;
    if (k == FaceKind::Gamma1) return g1(fp.x, fp.normal) * z.K.v;
    if (is_robin(k)) return g2(fp.x, fp.normal) * z.K.v;
    return 0.0;
  };
  return l;
}

LinearForm cr_linear(const ProblemSpec& p) { return continuous_linear(p); }

BilinearForm continuous_bilinear() {
  BilinearForm b;
  b.volume = volume_dcr;
  b.boundary = [](const FacePoint& p, const Entry& w, const Entry& z) {
    return is_robin(p.face->kind) ? p.alpha * w.K.v * z.K.v : 0.0;
  };
  return b;
}

BilinearForm ipg_bilinear(int theta, double eta) {
  if (theta < -1 || theta > 1) throw Error(ErrorCode::InvalidConfig, "theta must be -1, 0 or 1");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidConfig, "eta must be positive");
  const double th = theta;
  BilinearForm b;
  b.volume = volume_dcr;
  b.interior = [th, eta](const FacePoint& p, const Entry& w, const Entry& z) {
    const Vec2& n = p.normal;
    double jw = w.K.v - w.N.v, jz = z.K.v - z.N.v;
    double flux_w = 0.5 * (p.K * (w.K.g + w.N.g)).dot(n);
    double flux_z = 0.5 * (p.K * (z.K.g + z.N.g)).dot(n);
    return th * flux_z * jw - flux_w * jz + eta / p.h * jw * jz + interior_upwind(p, w, z);
  };
  b.boundary = [th, eta](const FacePoint& p, const Entry& w, const Entry& z) {
    const Vec2& n = p.normal;
    switch (p.face->kind) {
      case FaceKind::Gamma3:
        return th * (p.K * z.K.g).dot(n) * w.K.v - (p.K * w.K.g).dot(n) * z.K.v + eta / p.h * w.K.v * z.K.v;
      case FaceKind::Gamma21: return boundary_upwind(p, w, z);
      case FaceKind::Gamma22:
      case FaceKind::Gamma2: return p.alpha * w.K.v * z.K.v;
      default: return 0.0;
    }
  };
  return b;
}

LinearForm ipg_linear(const ProblemSpec& p, int theta, double eta) {
  if (theta < -1 || theta > 1) throw Error(ErrorCode::InvalidConfig, "theta must be -1, 0 or 1");
  LinearForm l = continuous_linear(p);
  const double th = theta;
  BoundaryField g1 = p.g1, g2 = p.g2, g3 = p.g3;
  l.boundary = [=](const FacePoint& fp, const Entry& z) {
    const Vec2& n = fp.normal;
    FaceKind k = fp.face->kind;
    if (k == FaceKind::Gamma1) return g1(fp.x, n) * z.K.v;
    if (is_robin(k)) return g2(fp.x, n) * z.K.v;
    if (k == FaceKind::Gamma3) {
      double g = g3(fp.x, n);
      return g * (eta / fp.h * z.K.v + th * (fp.K * z.K.g).dot(n) - fp.c.dot(n) * z.K.v);
    }
    return 0.0;
  };
  return l;
}

LinearForm source_load(ScalarField g) {
  LinearForm l;
  l.volume = [g = std::move(g)](const VolumePoint& vp, const Trace& z) { return g(vp.x) * z.v; };
  return l;
}

const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::L2: return "L2";
    case NormKind::BrokenH1Semi: return "BrokenH1Semi";
    case NormKind::BrokenH1: return "BrokenH1";
    case NormKind::EnergyVh: return "EnergyVh";
    case NormKind::ExtendedVh: return "ExtendedVh";
  }
  return "?";
}

BilinearForm norm_form(NormKind kind, double eta) {
  BilinearForm b;
  switch (kind) {
    case NormKind::L2:
      b.volume = [](const VolumePoint&, const Trace& w, const Trace& z) { return w.v * z.v; };
      return b;
    case NormKind::BrokenH1Semi:
      b.volume = [](const VolumePoint&, const Trace& w, const Trace& z) { return w.g.dot(z.g); };
      return b;
    case NormKind::BrokenH1:
      b.volume = [](const VolumePoint&, const Trace& w, const Trace& z) { return w.g.dot(z.g) + w.v * z.v; };
      return b;
    case NormKind::EnergyVh:
    case NormKind::ExtendedVh: break;
  }
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidConfig, "eta must be positive");
  const bool extended = kind == NormKind::ExtendedVh;
  b.volume = [](const VolumePoint& p, const Trace& w, const Trace& z) {
    return (p.K * w.g).dot(z.g) + 0.5 * (2.0 * p.r + p.div_c) * w.v * z.v;
  };
  b.interior = [eta, extended](const FacePoint& p, const Entry& w, const Entry& z) {
    double cn = p.c.dot(p.normal);
    double jw = w.K.v - w.N.v, jz = z.K.v - z.N.v;
    double s = (eta / p.h + 0.5 * std::abs(cn)) * jw * jz;
    if (extended) {
      double scale = p.h / eta;
      s += scale * 0.25 * (w.K.g + w.N.g).dot(p.K * (z.K.g + z.N.g));
      s += scale * p.c.squaredNorm() * (w.K.v * z.K.v + w.N.v * z.N.v);
    }
    return s;
  };
  b.boundary = [eta, extended](const FacePoint& p, const Entry& w, const Entry& z) {
    double cn = p.c.dot(p.normal);
    double wz = w.K.v * z.K.v;
    double s = 0.0;
    switch (p.face->kind) {
      case FaceKind::Gamma3: s = (eta / p.h + 0.5 * std::abs(cn)) * wz; break;
      case FaceKind::Gamma1:
      case FaceKind::Gamma21: s = 0.5 * std::abs(cn) * wz; break;
      case FaceKind::Gamma22:
      case FaceKind::Gamma2: s = 0.5 * (2.0 * p.alpha - cn) * wz; break;
      default: break;
    }
    if (extended) {
      double scale = p.h / eta;
      if (p.face->kind == FaceKind::Gamma3) s += scale * w.K.g.dot(p.K * z.K.g);
      s += scale * p.c.squaredNorm() * wz;
    }
    return s;
  };
  return b;
}

}  // namespace ncfem
