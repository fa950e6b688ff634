#pragma once

#include <array>
#include <vector>

#include "punfold/mesh.hpp"
#include "punfold/unfold_tree.hpp"

namespace punfold {

// Per-face 2D triangles in layout coordinates; point k of face f corresponds
// to face_vertices(f)[k]. Hinge endpoints are copied bitwise from the parent
// triangle, so parent and child coincide exactly along the hinge.
struct Layout2D {
  std::vector<std::array<Vec2, 3>> tri;
  std::vector<char> placed;
  int placed_count = 0;

  bool is_placed(FaceId f) const {
    return f >= 0 && f < static_cast<int>(placed.size()) && placed[f];
  }
  const std::array<Vec2, 3>& triangle(FaceId f) const { return tri[f]; }
};

// Unfolds the whole tree: the root face is mapped isometrically with its
// first vertex at the origin and first edge on +x; every other face is
// anchored at its parent's hinge points.
Layout2D layout(const HalfEdgeMesh& mesh, const UnfoldTree& tree);

// Recomputes the placements of `face` and its whole subtree from the
// current placement of face's parent (or the root anchor for the root).
void relayout_subtree(const HalfEdgeMesh& mesh, const UnfoldTree& tree,
                      Layout2D& lay, FaceId face);

// Places the subtree rooted at `face` as if face were hinged to `parent`
// via `hinge`, without modifying `base`. Coordinates go to `scratch`
// (sized to face slots); visited faces are appended to `order`.
void place_subtree(const HalfEdgeMesh& mesh, const UnfoldTree& tree,
                   const Layout2D& base, FaceId face, FaceId parent,
                   EdgeId hinge, std::vector<std::array<Vec2, 3>>& scratch,
                   std::vector<FaceId>& order);

}  // namespace punfold
