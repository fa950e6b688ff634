#include "punfold/unfold_tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace punfold {

namespace {

void rebuild_children(UnfoldTree& tree) {
  for (UnfoldNode& n : tree.nodes) n.children.clear();
  for (FaceId f = 0; f < static_cast<int>(tree.nodes.size()); ++f)
    if (tree.nodes[f].parent != kInvalidId)
      tree.nodes[tree.nodes[f].parent].children.push_back(f);
}

}  // namespace

UnfoldTree initial_unfold_tree(const HalfEdgeMesh& mesh, Rng& rng) {
  const std::vector<EdgeId> edges = mesh.alive_edge_ids();
  const std::vector<FaceId> faces = mesh.alive_face_ids();
  if (faces.empty()) throw MeshError("cannot unfold an empty mesh");

  std::vector<double> steep(mesh.edge_slots(), 0.0);
  Vec3 c;
  for (int attempt = 0;; ++attempt) {
    c = rng.unit_vector();
    double lo = 1e300, hi = -1e300;
    for (EdgeId e : edges) {
      auto ends = mesh.edge_vertices(e);
      Vec3 dir = normalized(mesh.position(ends[1]) - mesh.position(ends[0]));
      steep[e] = std::fabs(dot(c, dir));
      lo = std::min(lo, steep[e]);
      hi = std::max(hi, steep[e]);
    }
    // A degenerate objective ties every edge; re-draw a few times, then
    // proceed with ties broken by edge id.
    if (hi - lo > 1e-12 || attempt >= 8) break;
  }

  UnfoldTree tree;
  tree.nodes.assign(mesh.face_slots(), UnfoldNode{});
  tree.root = faces.front();

  struct Arc {
    double weight;
    EdgeId edge;
    FaceId to;
    FaceId from;
  };
  auto worse = [](const Arc& a, const Arc& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.edge > b.edge;
  };
  std::priority_queue<Arc, std::vector<Arc>, decltype(worse)> heap(worse);
  std::vector<char> in_tree(mesh.face_slots(), 0);

  auto push_face = [&](FaceId f) {
    for (EdgeId e : mesh.face_edges(f)) {
      FaceId g = mesh.opposite_face(f, e);
      if (g != kInvalidId && !in_tree[g]) heap.push({steep[e], e, g, f});
    }
  };
  in_tree[tree.root] = 1;
  push_face(tree.root);
  while (!heap.empty()) {
    Arc a = heap.top();
    heap.pop();
    if (in_tree[a.to]) continue;
    in_tree[a.to] = 1;
    tree.nodes[a.to].parent = a.from;
    tree.nodes[a.to].hinge = a.edge;
    push_face(a.to);
  }
  rebuild_children(tree);

  // Root at the lowest-id face touching the steepest cut edge's highest
  // vertex along c.
  std::vector<char> is_hinge(mesh.edge_slots(), 0);
  for (FaceId f : faces)
    if (tree.nodes[f].hinge != kInvalidId) is_hinge[tree.nodes[f].hinge] = 1;
  EdgeId steepest = kInvalidId;
  for (EdgeId e : edges) {
    if (is_hinge[e]) continue;
    if (steepest == kInvalidId || steep[e] > steep[steepest]) steepest = e;
  }
  if (steepest != kInvalidId) {
    auto ends = mesh.edge_vertices(steepest);
    double h0 = dot(c, mesh.position(ends[0]));
    double h1 = dot(c, mesh.position(ends[1]));
    VertexId high = h1 > h0 ? ends[1] : ends[0];
    std::vector<FaceId> around = mesh.vertex_faces(high);
    FaceId root = *std::min_element(around.begin(), around.end());
    reroot(tree, root);
  }
  return tree;
}

void reroot(UnfoldTree& tree, FaceId new_root) {
  if (new_root == tree.root) return;
  if (!tree.in_tree(new_root)) throw MeshError("reroot target is not in the tree");

  // Record the parent chain new_root → old root, then reverse it.
  std::vector<FaceId> path;
  std::vector<EdgeId> hinges;
  for (FaceId f = new_root; f != kInvalidId;) {
    path.push_back(f);
    hinges.push_back(tree.nodes[f].hinge);
    f = tree.nodes[f].parent;
  }
  tree.nodes[new_root].parent = kInvalidId;
  tree.nodes[new_root].hinge = kInvalidId;
  for (size_t i = 1; i < path.size(); ++i) {
    tree.nodes[path[i]].parent = path[i - 1];
    tree.nodes[path[i]].hinge = hinges[i - 1];
  }
  tree.root = new_root;
  rebuild_children(tree);
}

void detach_node(UnfoldTree& tree, FaceId face) {
  FaceId p = tree.nodes[face].parent;
  if (p != kInvalidId) {
    auto& kids = tree.nodes[p].children;
    kids.erase(std::remove(kids.begin(), kids.end(), face), kids.end());
  }
  tree.nodes[face].parent = kInvalidId;
  tree.nodes[face].hinge = kInvalidId;
}

void attach_node(UnfoldTree& tree, FaceId face, FaceId parent, EdgeId hinge) {
  tree.nodes[face].parent = parent;
  tree.nodes[face].hinge = hinge;
  auto& kids = tree.nodes[parent].children;
  kids.insert(std::lower_bound(kids.begin(), kids.end(), face), face);
}

void apply_move(UnfoldTree& tree, const HalfEdgeMesh& mesh, FaceId face,
                FaceId new_parent) {
  if (!tree.in_tree(face) || face == tree.root)
    throw MeshError("moved face is not a non-root tree node");
  if (!tree.in_tree(new_parent))
    throw MeshError("new parent is not in the tree");
  if (is_in_subtree(tree, new_parent, face))
    throw MeshError("move would create a cycle");

  EdgeId hinge = kInvalidId;
  for (EdgeId e : mesh.face_edges(face))
    if (mesh.opposite_face(face, e) == new_parent) hinge = e;
  if (hinge == kInvalidId) throw MeshError("faces are not mesh-adjacent");

  detach_node(tree, face);
  attach_node(tree, face, new_parent, hinge);
}

bool is_in_subtree(const UnfoldTree& tree, FaceId node, FaceId sub_root) {
  for (FaceId f = node; f != kInvalidId; f = tree.nodes[f].parent)
    if (f == sub_root) return true;
  return false;
}

std::vector<FaceId> subtree_faces(const UnfoldTree& tree, FaceId sub_root) {
  std::vector<FaceId> out;
  std::vector<FaceId> stack = {sub_root};
  while (!stack.empty()) {
    FaceId f = stack.back();
    stack.pop_back();
    out.push_back(f);
    for (FaceId c : tree.nodes[f].children) stack.push_back(c);
  }
  return out;
}

std::vector<EdgeId> cut_edges(const HalfEdgeMesh& mesh, const UnfoldTree& tree) {
  std::vector<char> is_hinge(mesh.edge_slots(), 0);
  for (FaceId f = 0; f < static_cast<int>(tree.nodes.size()); ++f)
    if (tree.nodes[f].parent != kInvalidId) is_hinge[tree.nodes[f].hinge] = 1;
  std::vector<EdgeId> out;
  for (EdgeId e : mesh.alive_edge_ids())
    if (!is_hinge[e]) out.push_back(e);
  return out;
}

std::string audit_tree(const UnfoldTree& tree, const HalfEdgeMesh& mesh) {
  std::ostringstream err;
  const int slots = static_cast<int>(tree.nodes.size());
  if (slots != mesh.face_slots()) return "tree node array size mismatch";
  if (tree.root == kInvalidId || !mesh.face_alive(tree.root))
    return "tree root is not an alive face";
  if (tree.nodes[tree.root].parent != kInvalidId) return "root has a parent";

  int in_tree_count = 0;
  for (FaceId f = 0; f < slots; ++f) {
    const UnfoldNode& n = tree.nodes[f];
    if (!mesh.face_alive(f)) {
      if (f == tree.root || n.parent != kInvalidId) {
        err << "dead face " << f << " is linked into the tree";
        return err.str();
      }
      continue;
    }
    if (!tree.in_tree(f)) {
      err << "alive face " << f << " is not in the tree";
      return err.str();
    }
    ++in_tree_count;
    if (f == tree.root) continue;
    if (n.hinge == kInvalidId || !mesh.edge_alive(n.hinge)) {
      err << "face " << f << " has no alive hinge";
      return err.str();
    }
    if (mesh.opposite_face(f, n.hinge) != n.parent) {
      err << "face " << f << " hinge does not reach its parent";
      return err.str();
    }
    const auto& kids = tree.nodes[n.parent].children;
    if (std::find(kids.begin(), kids.end(), f) == kids.end()) {
      err << "face " << f << " missing from its parent's children";
      return err.str();
    }
    // Acyclicity: the walk to the root must terminate.
    int steps = 0;
    for (FaceId x = f; x != kInvalidId; x = tree.nodes[x].parent) {
      if (++steps > slots + 1) {
        err << "parent chain of face " << f << " cycles";
        return err.str();
      }
    }
  }
  int child_links = 0;
  for (FaceId f = 0; f < slots; ++f) {
    for (FaceId c : tree.nodes[f].children) {
      ++child_links;
      if (tree.nodes[c].parent != f) {
        err << "child list of " << f << " disagrees with parent of " << c;
        return err.str();
      }
    }
  }
  if (child_links != in_tree_count - 1) return "children/parent link count mismatch";
  return "";
}

}  // namespace punfold
