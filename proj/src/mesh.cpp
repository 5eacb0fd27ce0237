#include "ncfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "ncfem/error.hpp"

namespace ncfem {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Vertices of local face i (opposite local vertex i).
std::pair<int, int> local_face_vertices(const std::array<int, 3>& tri, int i) {
  return {tri[(i + 1) % 3], tri[(i + 2) % 3]};
}

int tag_code(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Gamma1: return 1;
    case BoundaryTag::Gamma2: return 2;
    case BoundaryTag::Gamma21: return 21;
    case BoundaryTag::Gamma22: return 22;
    case BoundaryTag::Gamma3: return 3;
  }
  return 0;
}

}  // namespace

const char* to_string(FaceKind kind) {
  switch (kind) {
    case FaceKind::Interior: return "Interior";
    case FaceKind::Gamma1: return "Gamma1";
    case FaceKind::Gamma2: return "Gamma2";
    case FaceKind::Gamma21: return "Gamma21";
    case FaceKind::Gamma22: return "Gamma22";
    case FaceKind::Gamma3: return "Gamma3";
    case FaceKind::Untagged: return "Untagged";
  }
  return "?";
}

FaceKind face_kind(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Gamma1: return FaceKind::Gamma1;
    case BoundaryTag::Gamma2: return FaceKind::Gamma2;
    case BoundaryTag::Gamma21: return FaceKind::Gamma21;
    case BoundaryTag::Gamma22: return FaceKind::Gamma22;
    case BoundaryTag::Gamma3: return FaceKind::Gamma3;
  }
  return FaceKind::Untagged;
}

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<BoundaryEdge> boundary, int level)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary)),
      level_(level) {
  const int nv = num_vertices();
  auto check = [nv](int v) {
    if (v < 0 || v >= nv) throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
  };
  for (const auto& t : triangles_)
    for (int v : t) check(v);
  for (const auto& e : boundary_) {
    check(e.a);
    check(e.b);
  }
  build_faces();
}

void Mesh::build_faces() {
  std::map<EdgeKey, int> ids;
  std::map<EdgeKey, BoundaryTag> tags;
  for (const auto& e : boundary_) tags[edge_key(e.a, e.b)] = e.tag;

  element_faces_.assign(triangles_.size(), {-1, -1, -1});
  for (int t = 0; t < num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      auto [a, b] = local_face_vertices(triangles_[t], i);
      auto key = edge_key(a, b);
      auto it = ids.find(key);
      if (it == ids.end()) {
        Face f;
        f.id = num_faces();
        f.endpoints = {a, b};
        f.owner = t;
        f.owner_local = i;
        f.length = (vertices_[b] - vertices_[a]).norm();
        faces_.push_back(f);
        ids.emplace(key, f.id);
        element_faces_[t][i] = f.id;
      } else {
        Face& f = faces_[it->second];
        // a third incidence is a broken mesh; verify_consistency reports it
        if (f.neighbor < 0) {
          f.neighbor = t;
          f.neighbor_local = i;
        }
        element_faces_[t][i] = it->second;
      }
    }
  }
  for (auto& f : faces_) {
    f.normal = outward_normal(f.owner, f.owner_local);
    if (f.neighbor >= 0) {
      f.kind = FaceKind::Interior;
    } else {
      auto it = tags.find(edge_key(f.endpoints[0], f.endpoints[1]));
      f.kind = it == tags.end() ? FaceKind::Untagged : face_kind(it->second);
    }
  }
}

std::array<Vec2, 3> Mesh::corners(int t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double Mesh::area(int t) const {
  auto p = corners(t);
  Vec2 e1 = p[1] - p[0], e2 = p[2] - p[0];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::diameter(int t) const {
  auto p = corners(t);
  return std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
}

Vec2 Mesh::centroid(int t) const {
  auto p = corners(t);
  return (p[0] + p[1] + p[2]) / 3.0;
}

Vec2 Mesh::midpoint(int f) const {
  const auto& e = faces_[f].endpoints;
  return 0.5 * (vertices_[e[0]] + vertices_[e[1]]);
}

Vec2 Mesh::outward_normal(int t, int local) const {
  auto [a, b] = local_face_vertices(triangles_[t], local);
  Vec2 d = vertices_[b] - vertices_[a];
  Vec2 n(d.y(), -d.x());
  n.normalize();
  // orientation-independent: point away from the opposite vertex
  if (n.dot(vertices_[triangles_[t][local]] - vertices_[a]) > 0) n = -n;
  return n;
}

int Mesh::count_faces(FaceKind kind) const {
  return static_cast<int>(
      std::count_if(faces_.begin(), faces_.end(), [kind](const Face& f) { return f.kind == kind; }));
}

BoundaryLayout uniform_layout(BoundaryTag tag) {
  return [tag](Side, const Vec2&) { return tag; };
}

BoundaryLayout side_layout(BoundaryTag left, BoundaryTag right, BoundaryTag bottom, BoundaryTag top) {
  return [=](Side s, const Vec2&) {
    switch (s) {
      case Side::Left: return left;
      case Side::Right: return right;
      case Side::Bottom: return bottom;
      case Side::Top: return top;
    }
    return left;
  };
}

Mesh generate_unit_square(int n, const BoundaryLayout& layout) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "generate_unit_square needs n >= 1");
  const int row = n + 1;
  auto vid = [row](int i, int j) { return j * row + i; };

  std::vector<Vec2> verts;
  verts.reserve(static_cast<size_t>(row) * row);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(double(i) / n, double(j) / n);

  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        tris.push_back({v00, v10, v11});
        tris.push_back({v00, v11, v01});
      } else {
        tris.push_back({v00, v10, v01});
        tris.push_back({v10, v11, v01});
      }
    }
  }

  std::vector<BoundaryEdge> bnd;
  auto add = [&](int a, int b, Side s) {
    Vec2 mid = 0.5 * (verts[a] + verts[b]);
    bnd.push_back({a, b, layout(s, mid)});
  };
  for (int i = 0; i < n; ++i) {
    add(vid(i, 0), vid(i + 1, 0), Side::Bottom);
    add(vid(i + 1, n), vid(i, n), Side::Top);
  }
  for (int j = 0; j < n; ++j) {
    add(vid(n, j), vid(n, j + 1), Side::Right);
    add(vid(0, j + 1), vid(0, j), Side::Left);
  }
  return Mesh(std::move(verts), std::move(tris), std::move(bnd), 0);
}

Mesh refine_uniform(const Mesh& m) {
  std::vector<Vec2> verts = m.vertices();
  std::map<EdgeKey, int> mids;
  auto mid = [&](int a, int b) {
    auto key = edge_key(a, b);
    auto it = mids.find(key);
    if (it != mids.end()) return it->second;
    int id = static_cast<int>(verts.size());
    verts.push_back(0.5 * (m.vertex(a) + m.vertex(b)));
    mids.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * m.triangles().size());
  for (const auto& t : m.triangles()) {
    int m0 = mid(t[1], t[2]), m1 = mid(t[2], t[0]), m2 = mid(t[0], t[1]);
    tris.push_back({t[0], m2, m1});
    tris.push_back({m2, t[1], m0});
    tris.push_back({m1, m0, t[2]});
    tris.push_back({m0, m1, m2});
  }

  std::vector<BoundaryEdge> bnd;
  bnd.reserve(2 * m.boundary_edges().size());
  for (const auto& e : m.boundary_edges()) {
    int c = mid(e.a, e.b);
    bnd.push_back({e.a, c, e.tag});
    bnd.push_back({c, e.b, e.tag});
  }
  return Mesh(std::move(verts), std::move(tris), std::move(bnd), m.level() + 1);
}

double mesh_size(const Mesh& m) {
  double h = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) h = std::max(h, m.diameter(t));
  return h;
}

double shape_ratio(const Mesh& m, int t) {
  auto p = m.corners(t);
  double a = (p[1] - p[2]).norm(), b = (p[2] - p[0]).norm(), c = (p[0] - p[1]).norm();
  double A = std::abs(m.area(t));
  double s = 0.5 * (a + b + c);
  double R = a * b * c / (4.0 * A);
  double r = A / s;
  return R / r;
}

double shape_regularity(const Mesh& m) {
  double q = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) q = std::max(q, shape_ratio(m, t));
  return q;
}

ClassificationResult classify_boundary(const Mesh& m, const BoundaryField& alpha,
                                       const VectorField& c, double tol) {
  std::map<EdgeKey, const Face*> by_edge;
  for (const auto& f : m.faces())
    if (f.is_boundary()) by_edge[edge_key(f.endpoints[0], f.endpoints[1])] = &f;

  // sample points along a face, as fractions of its length
  static const double samples[] = {0.0, 0.1127016653792583, 0.5, 0.8872983346207417, 1.0};

  ClassificationResult out;
  std::vector<BoundaryEdge> bnd = m.boundary_edges();
  for (auto& e : bnd) {
    if (e.tag != BoundaryTag::Gamma2 && e.tag != BoundaryTag::Gamma21 && e.tag != BoundaryTag::Gamma22)
      continue;
    auto it = by_edge.find(edge_key(e.a, e.b));
    if (it == by_edge.end()) continue;
    const Face& f = *it->second;
    const Vec2 pa = m.vertex(f.endpoints[0]), pb = m.vertex(f.endpoints[1]);
    auto on_21 = [&](double s) {
      Vec2 x = pa + s * (pb - pa);
      return std::abs(alpha(x, f.normal) - f.normal.dot(c(x))) <= tol;
    };
    bool mid21 = on_21(0.5);
    e.tag = mid21 ? BoundaryTag::Gamma21 : BoundaryTag::Gamma22;
    for (double s : samples) {
      if (on_21(s) != mid21) {
        out.mixed_faces.push_back(f.id);
        break;
      }
    }
  }
  std::sort(out.mixed_faces.begin(), out.mixed_faces.end());
  out.mesh = Mesh(m.vertices(), m.triangles(), std::move(bnd), m.level());
  return out;
}

std::vector<Violation> verify_consistency(const Mesh& m) {
  std::vector<Violation> out;
  std::map<EdgeKey, int> incidence;
  for (const auto& t : m.triangles())
    for (int i = 0; i < 3; ++i) {
      auto [a, b] = local_face_vertices(t, i);
      ++incidence[edge_key(a, b)];
    }

  for (int t = 0; t < m.num_triangles(); ++t) {
    if (!(m.area(t) > 0.0)) {
      std::ostringstream os;
      os << "triangle " << t << " has nonpositive signed area " << m.area(t);
      out.push_back({ViolationKind::Orientation, t, os.str()});
    }
  }
  for (const auto& f : m.faces()) {
    int count = incidence[edge_key(f.endpoints[0], f.endpoints[1])];
    if (count > 2) {
      std::ostringstream os;
      os << "face " << f.id << " is shared by " << count << " triangles";
      out.push_back({ViolationKind::FaceMultiplicity, f.id, os.str()});
    }
    if (f.kind == FaceKind::Untagged) {
      std::ostringstream os;
      os << "boundary face " << f.id << " carries no boundary tag";
      out.push_back({ViolationKind::TagGap, f.id, os.str()});
    }
  }
  const auto& bnd = m.boundary_edges();
  for (size_t i = 0; i < bnd.size(); ++i) {
    auto it = incidence.find(edge_key(bnd[i].a, bnd[i].b));
    int idx = static_cast<int>(i);
    if (it == incidence.end()) {
      out.push_back({ViolationKind::DanglingTag, idx, "boundary tag on an edge of no triangle"});
    } else if (it->second >= 2) {
      out.push_back({ViolationKind::TagOnInteriorFace, idx, "boundary tag on an interior face"});
    }
  }
  return out;
}

Mesh read_mesh(std::istream& in) {
  auto fail = [](const std::string& what) -> void { throw Error(ErrorCode::ParseError, what); };
  long nv = -1, nt = -1, nb = -1;
  if (!(in >> nv >> nt >> nb) || nv < 0 || nt < 0 || nb < 0) fail("bad header, expected `nv nt nb`");

  std::vector<Vec2> verts(static_cast<size_t>(nv));
  for (auto& v : verts) {
    double x, y;
    if (!(in >> x >> y)) fail("truncated vertex block");
    v = Vec2(x, y);
  }
  std::vector<std::array<int, 3>> tris(static_cast<size_t>(nt));
  for (auto& t : tris)
    if (!(in >> t[0] >> t[1] >> t[2])) fail("truncated triangle block");

  std::vector<BoundaryEdge> bnd(static_cast<size_t>(nb));
  for (auto& e : bnd) {
    int code;
    if (!(in >> e.a >> e.b >> code)) fail("truncated boundary block");
    switch (code) {
      case 1: e.tag = BoundaryTag::Gamma1; break;
      case 2: e.tag = BoundaryTag::Gamma2; break;
      case 21: e.tag = BoundaryTag::Gamma21; break;
      case 22: e.tag = BoundaryTag::Gamma22; break;
      case 3: e.tag = BoundaryTag::Gamma3; break;
      default: fail("unknown boundary tag " + std::to_string(code));
    }
  }
  std::string rest;
  if (in >> rest) fail("trailing content after boundary block");
  try {
    return Mesh(std::move(verts), std::move(tris), std::move(bnd));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& m) {
  std::ostringstream os;
  os.precision(17);
  os << m.num_vertices() << ' ' << m.num_triangles() << ' ' << m.boundary_edges().size() << '\n';
  for (const auto& v : m.vertices()) os << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : m.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : m.boundary_edges()) os << e.a << ' ' << e.b << ' ' << tag_code(e.tag) << '\n';
  out << os.str();
}

}  // namespace ncfem
