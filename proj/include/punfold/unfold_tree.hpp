#pragma once

#include <string>
#include <vector>

#include "punfold/mesh.hpp"
#include "punfold/rng.hpp"

namespace punfold {

struct UnfoldNode {
  FaceId parent = kInvalidId;  // kInvalidId for the root and detached slots
  EdgeId hinge = kInvalidId;   // mesh edge shared with the parent face
  std::vector<FaceId> children;
};

// Rooted spanning tree over the dual graph. Nodes are indexed by face id
// (dead face slots carry inert nodes); hinge edges are exactly the
// complement of the cut set.
struct UnfoldTree {
  FaceId root = kInvalidId;
  std::vector<UnfoldNode> nodes;

  bool in_tree(FaceId f) const {
    return f >= 0 && f < static_cast<int>(nodes.size()) &&
           (f == root || nodes[f].parent != kInvalidId);
  }
};

// Steepest-edge initial unfolding: draws a random unit objective vector c,
// scores every edge by steepness |c·ê|, and keeps a minimum-total-steepness
// dual spanning tree as hinges (so steep edges tend to be cut). Ties break
// toward the lower edge id. The root is the lowest face at the steepest cut
// edge's highest vertex along c.
UnfoldTree initial_unfold_tree(const HalfEdgeMesh& mesh, Rng& rng);

// Reverses parent links along the path old-root → new-root. The hinge set
// is unchanged, so an existing layout stays valid.
void reroot(UnfoldTree& tree, FaceId new_root);

// Reattaches `face` to mesh-adjacent `new_parent`. Throws MeshError when
// the faces are not adjacent or the move would create a cycle.
void apply_move(UnfoldTree& tree, const HalfEdgeMesh& mesh, FaceId face,
                FaceId new_parent);

// Low-level tree surgery without validity checks.
void detach_node(UnfoldTree& tree, FaceId face);
void attach_node(UnfoldTree& tree, FaceId face, FaceId parent, EdgeId hinge);

bool is_in_subtree(const UnfoldTree& tree, FaceId node, FaceId sub_root);
// Faces of the subtree rooted at sub_root, in depth-first order.
std::vector<FaceId> subtree_faces(const UnfoldTree& tree, FaceId sub_root);

// Alive mesh edges that are not hinges.
std::vector<EdgeId> cut_edges(const HalfEdgeMesh& mesh, const UnfoldTree& tree);

// Structural check: spanning, acyclic, hinges shared with parents,
// children lists consistent. Empty string when consistent.
std::string audit_tree(const UnfoldTree& tree, const HalfEdgeMesh& mesh);

}  // namespace punfold
