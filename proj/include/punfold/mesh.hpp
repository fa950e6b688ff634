#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "punfold/vec.hpp"

namespace punfold {

using VertexId = int;
using HalfedgeId = int;
using FaceId = int;
using EdgeId = int;

constexpr int kInvalidId = -1;

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Halfedge {
  VertexId origin = kInvalidId;
  HalfedgeId twin = kInvalidId;
  HalfedgeId next = kInvalidId;
  FaceId face = kInvalidId;  // kInvalidId on boundary halfedges
  EdgeId edge = kInvalidId;
  bool alive = false;
};

struct VertexRec {
  Vec3 position;
  HalfedgeId halfedge = kInvalidId;  // one outgoing halfedge
  bool alive = false;
};

struct FaceRec {
  HalfedgeId halfedge = kInvalidId;
  bool alive = false;
};

struct EdgeRec {
  HalfedgeId halfedge = kInvalidId;  // canonical interior halfedge when one exists
  bool alive = false;
};

struct MeshValidationReport {
  bool is_manifold = false;
  bool is_orientable = false;
  bool is_triangular = false;
  int component_count = 0;
  int boundary_edge_count = 0;
  int genus = 0;          // meaningful only when genus_known
  bool genus_known = false;  // closed, manifold, single component
};

// Indexed halfedge representation of a triangular manifold surface.
// Element ids are dense slot indices; removal marks slots dead and slots are
// revived with the same id when a collapse is undone, so records can refer to
// stable ids across decimation.
class HalfEdgeMesh {
 public:
  // Builds the halfedge structure from positions and oriented triangles.
  // Throws MeshError on non-manifold edges, inconsistent orientation,
  // degenerate or duplicate faces, out-of-range or unreferenced vertices.
  static HalfEdgeMesh from_face_list(std::vector<Vec3> positions,
                                     const std::vector<std::array<int, 3>>& faces);

  // Alive-element counts.
  int vertex_count() const { return alive_vertices_; }
  int edge_count() const { return alive_edges_; }
  int face_count() const { return alive_faces_; }
  int boundary_edge_count() const { return boundary_edges_; }
  bool is_closed() const { return boundary_edges_ == 0; }

  // Slot-array sizes (dead slots included).
  int vertex_slots() const { return static_cast<int>(vertices_.size()); }
  int edge_slots() const { return static_cast<int>(edges_.size()); }
  int face_slots() const { return static_cast<int>(faces_.size()); }
  int halfedge_slots() const { return static_cast<int>(halfedges_.size()); }

  bool vertex_alive(VertexId v) const { return vertices_[v].alive; }
  bool edge_alive(EdgeId e) const { return edges_[e].alive; }
  bool face_alive(FaceId f) const { return faces_[f].alive; }
  bool halfedge_alive(HalfedgeId h) const { return halfedges_[h].alive; }

  const Vec3& position(VertexId v) const { return vertices_[v].position; }
  void set_position(VertexId v, const Vec3& p) { vertices_[v].position = p; }

  HalfedgeId twin(HalfedgeId h) const { return halfedges_[h].twin; }
  HalfedgeId next(HalfedgeId h) const { return halfedges_[h].next; }
  VertexId origin(HalfedgeId h) const { return halfedges_[h].origin; }
  VertexId dest(HalfedgeId h) const { return halfedges_[halfedges_[h].twin].origin; }
  FaceId face(HalfedgeId h) const { return halfedges_[h].face; }
  EdgeId edge_of(HalfedgeId h) const { return halfedges_[h].edge; }
  bool is_boundary_halfedge(HalfedgeId h) const { return halfedges_[h].face == kInvalidId; }

  HalfedgeId halfedge_of_face(FaceId f) const { return faces_[f].halfedge; }
  HalfedgeId halfedge_of_edge(EdgeId e) const { return edges_[e].halfedge; }
  HalfedgeId halfedge_of_vertex(VertexId v) const { return vertices_[v].halfedge; }

  // Previous halfedge in its cycle: next(next(h)) inside a triangle, a walk
  // around the origin vertex on boundary loops.
  HalfedgeId prev(HalfedgeId h) const;

  bool edge_is_boundary(EdgeId e) const;
  std::array<VertexId, 2> edge_vertices(EdgeId e) const;
  std::array<VertexId, 3> face_vertices(FaceId f) const;
  std::array<EdgeId, 3> face_edges(FaceId f) const;
  // Face on the other side of edge e from face f; kInvalidId across boundary.
  FaceId opposite_face(FaceId f, EdgeId e) const;

  // Ids of alive outgoing halfedges of v, in circulation order.
  std::vector<HalfedgeId> outgoing_halfedges(VertexId v) const;
  std::vector<VertexId> vertex_neighbors(VertexId v) const;
  std::vector<FaceId> vertex_faces(VertexId v) const;
  bool vertex_on_boundary(VertexId v) const;
  int face_valence(FaceId f) const;  // number of face neighbors across edges

  Vec3 face_normal(FaceId f) const;  // unnormalized (area-weighted)
  double face_area(FaceId f) const;

  std::vector<VertexId> alive_vertex_ids() const;
  std::vector<EdgeId> alive_edge_ids() const;
  std::vector<FaceId> alive_face_ids() const;

  // Diagonal of the axis-aligned bounding box of alive vertices.
  double bbox_diagonal() const;

  MeshValidationReport validate() const;
  double average_dual_valence() const;

  // Full structural invariant check (twin involution, triangular next
  // cycles, orientation, incidence consistency, alive-count bookkeeping).
  // Returns an empty string when consistent, else a description of the
  // first violation found.
  std::string audit() const;

  bool operator==(const HalfEdgeMesh& other) const;

  // Raw slot access for collapse records.
  Halfedge& halfedge_rec(HalfedgeId h) { return halfedges_[h]; }
  VertexRec& vertex_rec(VertexId v) { return vertices_[v]; }
  FaceRec& face_rec(FaceId f) { return faces_[f]; }
  EdgeRec& edge_rec(EdgeId e) { return edges_[e]; }
  const Halfedge& halfedge_rec(HalfedgeId h) const { return halfedges_[h]; }
  const VertexRec& vertex_rec(VertexId v) const { return vertices_[v]; }
  const FaceRec& face_rec(FaceId f) const { return faces_[f]; }
  const EdgeRec& edge_rec(EdgeId e) const { return edges_[e]; }

  void adjust_counts(int dv, int de, int df, int dboundary) {
    alive_vertices_ += dv;
    alive_edges_ += de;
    alive_faces_ += df;
    boundary_edges_ += dboundary;
  }

 private:
  std::vector<VertexRec> vertices_;
  std::vector<Halfedge> halfedges_;
  std::vector<FaceRec> faces_;
  std::vector<EdgeRec> edges_;
  int alive_vertices_ = 0;
  int alive_edges_ = 0;
  int alive_faces_ = 0;
  int boundary_edges_ = 0;
};

}  // namespace punfold
