#include "punfold/layout.hpp"

#include <algorithm>
#include <cmath>

namespace punfold {

namespace {

std::array<Vec2, 3> root_anchor(const HalfEdgeMesh& mesh, FaceId f) {
  auto fv = mesh.face_vertices(f);
  const Vec3& p0 = mesh.position(fv[0]);
  const Vec3& p1 = mesh.position(fv[1]);
  const Vec3& p2 = mesh.position(fv[2]);
  double d01 = distance(p0, p1);
  double d02 = distance(p0, p2);
  double d12 = distance(p1, p2);
  double x = d01 > 0.0 ? (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01) : 0.0;
  double y = std::sqrt(std::max(0.0, d02 * d02 - x * x));
  return {Vec2{0.0, 0.0}, Vec2{d01, 0.0}, Vec2{x, y}};
}

// Anchors `child` on the hinge segment already placed in `parent_tri` and
// reconstructs its apex from 3D edge lengths. With all faces wound CCW the
// apex lands on the far side of the hinge from the parent automatically.
std::array<Vec2, 3> place_child(const HalfEdgeMesh& mesh, FaceId child,
                                EdgeId hinge, FaceId parent,
                                const std::array<Vec2, 3>& parent_tri) {
  HalfedgeId hc = mesh.halfedge_of_edge(hinge);
  if (mesh.face(hc) != child) hc = mesh.twin(hc);
  const VertexId s = mesh.origin(hc);
  const VertexId t = mesh.dest(hc);

  auto pfv = mesh.face_vertices(parent);
  Vec2 s2{}, t2{};
  for (int k = 0; k < 3; ++k) {
    if (pfv[k] == s) s2 = parent_tri[k];
    if (pfv[k] == t) t2 = parent_tri[k];
  }

  auto cfv = mesh.face_vertices(child);
  VertexId w = kInvalidId;
  for (VertexId vv : cfv)
    if (vv != s && vv != t) w = vv;

  Vec2 apex = s2;
  Vec2 base = t2 - s2;
  double d2 = norm(base);
  if (d2 > 0.0) {
    double la = distance(mesh.position(w), mesh.position(s));
    double lb = distance(mesh.position(w), mesh.position(t));
    double x = (la * la + d2 * d2 - lb * lb) / (2.0 * d2);
    double y = std::sqrt(std::max(0.0, la * la - x * x));
    Vec2 ex = base * (1.0 / d2);
    Vec2 ey = perp(ex);
    apex = s2 + ex * x + ey * y;
  }

  std::array<Vec2, 3> out{};
  for (int k = 0; k < 3; ++k) {
    if (cfv[k] == s)
      out[k] = s2;
    else if (cfv[k] == t)
      out[k] = t2;
    else
      out[k] = apex;
  }
  return out;
}

}  // namespace

Layout2D layout(const HalfEdgeMesh& mesh, const UnfoldTree& tree) {
  Layout2D lay;
  lay.tri.assign(mesh.face_slots(), {});
  lay.placed.assign(mesh.face_slots(), 0);
  if (tree.root == kInvalidId) return lay;

  lay.tri[tree.root] = root_anchor(mesh, tree.root);
  lay.placed[tree.root] = 1;
  lay.placed_count = 1;
  std::vector<FaceId> stack = {tree.root};
  while (!stack.empty()) {
    FaceId f = stack.back();
    stack.pop_back();
    for (FaceId c : tree.nodes[f].children) {
      lay.tri[c] = place_child(mesh, c, tree.nodes[c].hinge, f, lay.tri[f]);
      lay.placed[c] = 1;
      ++lay.placed_count;
      stack.push_back(c);
    }
  }
  return lay;
}

void relayout_subtree(const HalfEdgeMesh& mesh, const UnfoldTree& tree,
                      Layout2D& lay, FaceId face) {
  if (face == tree.root)
    lay.tri[face] = root_anchor(mesh, face);
  else
    lay.tri[face] = place_child(mesh, face, tree.nodes[face].hinge,
                                tree.nodes[face].parent,
                                lay.tri[tree.nodes[face].parent]);
  if (!lay.placed[face]) {
    lay.placed[face] = 1;
    ++lay.placed_count;
  }
  std::vector<FaceId> stack = {face};
  while (!stack.empty()) {
    FaceId f = stack.back();
    stack.pop_back();
    for (FaceId c : tree.nodes[f].children) {
      lay.tri[c] = place_child(mesh, c, tree.nodes[c].hinge, f, lay.tri[f]);
      if (!lay.placed[c]) {
        lay.placed[c] = 1;
        ++lay.placed_count;
      }
      stack.push_back(c);
    }
  }
}

void place_subtree(const HalfEdgeMesh& mesh, const UnfoldTree& tree,
                   const Layout2D& base, FaceId face, FaceId parent,
                   EdgeId hinge, std::vector<std::array<Vec2, 3>>& scratch,
                   std::vector<FaceId>& order) {
  scratch[face] = place_child(mesh, face, hinge, parent, base.tri[parent]);
  order.push_back(face);
  std::vector<FaceId> stack = {face};
  while (!stack.empty()) {
    FaceId f = stack.back();
    stack.pop_back();
    for (FaceId c : tree.nodes[f].children) {
      scratch[c] = place_child(mesh, c, tree.nodes[c].hinge, f, scratch[f]);
      order.push_back(c);
      stack.push_back(c);
    }
  }
}

}  // namespace punfold
