#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "punfold/layout.hpp"
#include "punfold/unfold_tree.hpp"

namespace punfold {

// Unordered face pairs whose 2D triangles improperly intersect (contact
// along a shared hinge or at a single point is excluded by the exact
// intersection predicate). Pairs are normalized a < b and sorted.
struct OverlapSet {
  std::vector<std::pair<FaceId, FaceId>> pairs;

  int count() const { return static_cast<int>(pairs.size()); }
  bool empty() const { return pairs.empty(); }
  bool contains(FaceId a, FaceId b) const;
};

// Uniform grid over triangle bounding boxes. Candidate queries are a
// superset of every box-overlapping pair, so exact tests on candidates give
// results identical to brute force.
class OverlapGrid {
 public:
  explicit OverlapGrid(const Layout2D& lay);

  // Faces whose bounding box may intersect [lo, hi]; sorted, unique.
  std::vector<FaceId> candidates(const Vec2& lo, const Vec2& hi) const;

 private:
  double cell_ = 1.0;
  std::unordered_map<long long, std::vector<FaceId>> cells_;
};

void triangle_bbox(const std::array<Vec2, 3>& t, Vec2& lo, Vec2& hi);

// Exact pairwise improper-intersection test over all placed faces,
// grid-accelerated.
OverlapSet count_overlaps(const Layout2D& lay);

// Overlaps involving at least one face of the subtrees rooted at the
// touched faces: the restriction of count_overlaps to those faces.
OverlapSet subtree_overlap_check(const Layout2D& lay, const UnfoldTree& tree,
                                 const std::vector<FaceId>& touched);

}  // namespace punfold
