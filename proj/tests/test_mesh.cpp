#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ncfem/error.hpp"
#include "ncfem/mesh.hpp"
#include "support.hpp"

using namespace ncfem;

namespace {

const auto all3 = uniform_layout(BoundaryTag::Gamma3);

bool has_violation(const std::vector<Violation>& v, ViolationKind kind) {
  for (const auto& x : v)
    if (x.kind == kind) return true;
  return false;
}

}  // namespace

TEST(Mesh, CountsForTwoByTwo) {
  Mesh m = generate_unit_square(2, all3);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_faces(), 16);
  EXPECT_EQ(m.count_faces(FaceKind::Interior), 8);
  EXPECT_EQ(m.count_faces(FaceKind::Gamma3), 8);
  EXPECT_EQ(m.num_vertices() - m.num_faces() + m.num_triangles() + 1, 2);  // V - E + F with the outer face
}

TEST(Mesh, GeneratorCountsAndEuler) {
  for (int n : {1, 3, 5, 8}) {
    Mesh m = generate_unit_square(n, all3);
    EXPECT_EQ(m.num_triangles(), 2 * n * n);
    EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
    EXPECT_EQ(m.num_vertices() - m.num_faces() + m.num_triangles(), 1);
    EXPECT_EQ(m.count_faces(FaceKind::Gamma3), 4 * n);
  }
}

TEST(Mesh, SingleLeftNeumannEdge) {
  Mesh m = generate_unit_square(1, side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma3, BoundaryTag::Gamma3,
                                               BoundaryTag::Gamma3));
  EXPECT_EQ(m.count_faces(FaceKind::Gamma1), 1);
  for (const auto& f : m.faces()) {
    if (f.kind == FaceKind::Gamma1) {
      EXPECT_NEAR(m.midpoint(f.id).x(), 0.0, 1e-15);
    }
  }
}

TEST(Mesh, ZeroSubdivisionsRejected) {
  try {
    generate_unit_square(0, all3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Mesh, AreaPerimeterAndNormals) {
  Mesh m = refine_uniform(generate_unit_square(3, all3));
  double area = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    EXPECT_GT(m.area(t), 0.0);
    area += m.area(t);
  }
  EXPECT_NEAR(area, 1.0, 1e-12);

  double perimeter = 0.0;
  for (const auto& f : m.faces()) {
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
    // points away from the owner centroid
    EXPECT_GT((m.midpoint(f.id) - m.centroid(f.owner)).dot(f.normal), 0.0);
    if (f.is_boundary()) {
      perimeter += f.length;
    } else {
      Vec2 nn = m.outward_normal(f.neighbor, f.neighbor_local);
      EXPECT_NEAR((nn + f.normal).norm(), 0.0, 1e-14);
      EXPECT_LT(f.owner, f.neighbor);
    }
  }
  EXPECT_NEAR(perimeter, 4.0, 1e-12);
}

TEST(Mesh, MeshSize) {
  EXPECT_NEAR(mesh_size(generate_unit_square(1, all3)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(mesh_size(generate_unit_square(4, all3)), std::sqrt(2.0) / 4, 1e-15);
}

TEST(Mesh, RefinementQuadruplesAndHalves) {
  Mesh m = generate_unit_square(2, all3);
  Mesh r = refine_uniform(m);
  EXPECT_EQ(r.num_triangles(), 32);
  EXPECT_EQ(r.level(), 1);
  EXPECT_NEAR(mesh_size(r), mesh_size(m) / 2, 1e-15);
  EXPECT_TRUE(verify_consistency(r).empty());

  // red refinement keeps each child similar to its parent
  std::set<long> before, after;
  for (int t = 0; t < m.num_triangles(); ++t) before.insert(std::lround(shape_ratio(m, t) * 1e9));
  for (int t = 0; t < r.num_triangles(); ++t) after.insert(std::lround(shape_ratio(r, t) * 1e9));
  EXPECT_EQ(before, after);
  EXPECT_NEAR(shape_regularity(r), shape_regularity(m), 1e-12);
}

TEST(Mesh, RefinementInheritsTags) {
  auto layout = side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma3, BoundaryTag::Gamma2, BoundaryTag::Gamma2);
  Mesh r = refine_uniform(refine_uniform(generate_unit_square(2, layout)));
  for (const auto& f : r.faces()) {
    if (!f.is_boundary()) continue;
    Vec2 x = r.midpoint(f.id);
    FaceKind want = x.x() < 1e-12 ? FaceKind::Gamma1 : x.x() > 1 - 1e-12 ? FaceKind::Gamma3 : FaceKind::Gamma2;
    EXPECT_EQ(f.kind, want) << "at " << x.transpose();
  }
}

TEST(Mesh, ClassifyBoundary) {
  auto layout = uniform_layout(BoundaryTag::Gamma2);
  Mesh m = generate_unit_square(3, layout);
  VectorField c = [](const Vec2& x) { return Vec2(1.0 + x.y(), -0.5); };

  BoundaryField matching = [&](const Vec2& x, const Vec2& n) { return n.dot(c(x)); };
  Mesh a = classify_boundary(m, matching, c).mesh;
  EXPECT_EQ(a.count_faces(FaceKind::Gamma21), 12);

  BoundaryField above = [&](const Vec2& x, const Vec2& n) { return n.dot(c(x)) + 1.0; };
  Mesh b = classify_boundary(m, above, c).mesh;
  EXPECT_EQ(b.count_faces(FaceKind::Gamma22), 12);

  Mesh z = classify_boundary(m, constant_boundary_field(0.0), [](const Vec2&) { return Vec2(Vec2::Zero()); }).mesh;
  EXPECT_EQ(z.count_faces(FaceKind::Gamma21), 12);
}

TEST(Mesh, ConsistencyViolations) {
  EXPECT_TRUE(verify_consistency(generate_unit_square(2, all3)).empty());

  Mesh m = generate_unit_square(1, all3);
  auto tris = m.triangles();
  tris.push_back(tris[0]);
  Mesh dup(m.vertices(), tris, m.boundary_edges());
  EXPECT_TRUE(has_violation(verify_consistency(dup), ViolationKind::FaceMultiplicity));

  auto edges = m.boundary_edges();
  edges.pop_back();
  Mesh gap(m.vertices(), m.triangles(), edges);
  EXPECT_TRUE(has_violation(verify_consistency(gap), ViolationKind::TagGap));

  auto cw = m.triangles();
  std::swap(cw[0][1], cw[0][2]);
  Mesh flipped(m.vertices(), cw, m.boundary_edges());
  EXPECT_TRUE(has_violation(verify_consistency(flipped), ViolationKind::Orientation));
}

TEST(Mesh, AsciiRoundTrip) {
  auto layout = side_layout(BoundaryTag::Gamma1, BoundaryTag::Gamma3, BoundaryTag::Gamma21, BoundaryTag::Gamma22);
  Mesh m = generate_unit_square(3, layout);
  std::stringstream ss;
  write_mesh(ss, m);
  Mesh r = read_mesh(ss);
  ASSERT_EQ(r.num_faces(), m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) EXPECT_EQ(r.face(f).kind, m.face(f).kind);
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(r.vertex(v), m.vertex(v));
}

TEST(Mesh, AsciiParseErrors) {
  for (const char* bad : {"3 1", "3 1 0\n0 0\n1 0\n", "3 1 1\n0 0\n1 0\n0 1\n0 1 2\n0 1 7\n",
                          "3 1 0\n0 0\n1 0\n0 1\n0 1 5\n", "3 1 0\n0 0\n1 0\n0 1\n0 1 2\nextra"}) {
    std::istringstream in(bad);
    try {
      read_mesh(in);
      FAIL() << "accepted: " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
  }
}

TEST(Mesh, SingleTriangleFaces) {
  Mesh m = test::unit_right_triangle();
  ASSERT_EQ(m.num_faces(), 3);
  // local face 0 is the hypotenuse, opposite vertex (0,0)
  const Face& f0 = m.face(m.element_face(0, 0));
  EXPECT_NEAR(f0.length, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR((f0.normal - Vec2(1, 1) / std::sqrt(2.0)).norm(), 0.0, 1e-15);
}
