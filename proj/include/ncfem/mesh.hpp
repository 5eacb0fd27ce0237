#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ncfem/fields.hpp"

namespace ncfem {

/// Boundary piece a boundary face belongs to. Gamma2 is the coarse Robin tag
/// before the split into Gamma21 (alpha == nu.c) and Gamma22.
enum class BoundaryTag { Gamma1, Gamma2, Gamma21, Gamma22, Gamma3 };

enum class FaceKind { Interior, Gamma1, Gamma2, Gamma21, Gamma22, Gamma3, Untagged };

const char* to_string(FaceKind kind);
FaceKind face_kind(BoundaryTag tag);

inline bool is_robin(FaceKind k) {
  return k == FaceKind::Gamma2 || k == FaceKind::Gamma21 || k == FaceKind::Gamma22;
}

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::Gamma3;
};

struct Face {
  int id = 0;
  std::array<int, 2> endpoints{};
  int owner = 0;
  int neighbor = -1;  ///< -1 on the boundary
  int owner_local = 0;
  int neighbor_local = -1;
  Vec2 normal = Vec2::Zero();  ///< unit, outward from the owner
  double length = 0.0;
  FaceKind kind = FaceKind::Interior;

  bool is_boundary() const { return neighbor < 0; }
};

/// Triangulation of a polygonal domain. Local face i of a triangle is the
/// edge opposite local vertex i. Immutable after construction.
///
/// The constructor accepts topologically broken input (duplicate triangles,
/// missing tags, clockwise triangles) so that verify_consistency can report
/// it; it only rejects out-of-range vertex indices.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<BoundaryEdge> boundary, int level = 0);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int level() const { return level_; }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  std::array<Vec2, 3> corners(int t) const;
  /// Global face id of local face `local` (opposite local vertex) of triangle t.
  int element_face(int t, int local) const { return element_faces_[t][local]; }

  double area(int t) const;         ///< signed; positive for counterclockwise
  double diameter(int t) const;     ///< longest edge
  Vec2 centroid(int t) const;
  Vec2 midpoint(int f) const;
  /// Unit outward normal of local face `local` as seen from triangle t.
  Vec2 outward_normal(int t, int local) const;

  int count_faces(FaceKind kind) const;

 private:
  void build_faces();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  int level_ = 0;
};

enum class Side { Left, Right, Bottom, Top };

/// Maps a boundary edge of the unit square (side, edge midpoint) to a tag.
using BoundaryLayout = std::function<BoundaryTag(Side, const Vec2& midpoint)>;

BoundaryLayout uniform_layout(BoundaryTag tag);
BoundaryLayout side_layout(BoundaryTag left, BoundaryTag right, BoundaryTag bottom, BoundaryTag top);

/// Structured mesh of the unit square with n x n cells, each split by one
/// diagonal; the diagonal direction alternates in a checkerboard pattern.
Mesh generate_unit_square(int n, const BoundaryLayout& layout);

/// Red refinement: every triangle is split into four similar children.
Mesh refine_uniform(const Mesh& m);

/// Largest element diameter.
double mesh_size(const Mesh& m);

/// Largest circumradius/inradius ratio over the elements.
double shape_regularity(const Mesh& m);
double shape_ratio(const Mesh& m, int t);

struct ClassificationResult {
  Mesh mesh;
  std::vector<int> mixed_faces;  ///< faces on which alpha - nu.c changes classification
};

/// Splits coarse Gamma2 faces into Gamma21 (|alpha - nu.c| <= tol at the
/// face midpoint) and Gamma22. Faces whose Gauss points disagree with the
/// midpoint verdict are listed in mixed_faces but still tagged by the midpoint.
ClassificationResult classify_boundary(const Mesh& m, const BoundaryField& alpha,
                                       const VectorField& c, double tol = 1e-12);

enum class ViolationKind { FaceMultiplicity, Orientation, TagGap, TagOnInteriorFace, DanglingTag };

struct Violation {
  ViolationKind kind;
  int index;  ///< triangle or face id, or boundary-edge index for tags
  std::string message;
};

std::vector<Violation> verify_consistency(const Mesh& m);

/// ASCII format: `nv nt nb`, nv lines `x y`, nt lines `i j k`, nb lines `i j tag`
/// with tag in {1, 21, 22, 3}.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& m);

}  // namespace ncfem
