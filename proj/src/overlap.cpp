#include "punfold/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "punfold/predicates.hpp"

namespace punfold {

namespace {

constexpr long long kCellSpan = 1 << 20;  // grid indices are offset-packed

inline long long pack(long long ix, long long iy) {
  return ix * (2 * kCellSpan) + iy;
}

inline bool boxes_overlap(const Vec2& lo1, const Vec2& hi1, const Vec2& lo2,
                          const Vec2& hi2) {
  return lo1.x < hi2.x && lo2.x < hi1.x && lo1.y < hi2.y && lo2.y < hi1.y;
}

}  // namespace

bool OverlapSet::contains(FaceId a, FaceId b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
}

void triangle_bbox(const std::array<Vec2, 3>& t, Vec2& lo, Vec2& hi) {
  lo = hi = t[0];
  for (int k = 1; k < 3; ++k) {
    lo.x = std::min(lo.x, t[k].x);
    lo.y = std::min(lo.y, t[k].y);
    hi.x = std::max(hi.x, t[k].x);
    hi.y = std::max(hi.y, t[k].y);
  }
}

OverlapGrid::OverlapGrid(const Layout2D& lay) {
  double extent_sum = 0.0;
  int placed = 0;
  for (int f = 0; f < static_cast<int>(lay.placed.size()); ++f) {
    if (!lay.placed[f]) continue;
    Vec2 lo, hi;
    triangle_bbox(lay.tri[f], lo, hi);
    extent_sum += std::max(hi.x - lo.x, hi.y - lo.y);
    ++placed;
  }
  cell_ = placed > 0 ? extent_sum / placed : 1.0;
  if (!(cell_ > 0.0)) cell_ = 1.0;

  for (int f = 0; f < static_cast<int>(lay.placed.size()); ++f) {
    if (!lay.placed[f]) continue;
    Vec2 lo, hi;
    triangle_bbox(lay.tri[f], lo, hi);
    long long x0 = static_cast<long long>(std::floor(lo.x / cell_));
    long long x1 = static_cast<long long>(std::floor(hi.x / cell_));
    long long y0 = static_cast<long long>(std::floor(lo.y / cell_));
    long long y1 = static_cast<long long>(std::floor(hi.y / cell_));
    for (long long ix = x0; ix <= x1; ++ix)
      for (long long iy = y0; iy <= y1; ++iy)
        cells_[pack(ix, iy)].push_back(f);
  }
}

std::vector<FaceId> OverlapGrid::candidates(const Vec2& lo,
                                            const Vec2& hi) const {
  std::vector<FaceId> out;
  long long x0 = static_cast<long long>(std::floor(lo.x / cell_));
  long long x1 = static_cast<long long>(std::floor(hi.x / cell_));
  long long y0 = static_cast<long long>(std::floor(lo.y / cell_));
  long long y1 = static_cast<long long>(std::floor(hi.y / cell_));
  for (long long ix = x0; ix <= x1; ++ix)
    for (long long iy = y0; iy <= y1; ++iy) {
      auto it = cells_.find(pack(ix, iy));
      if (it == cells_.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OverlapSet count_overlaps(const Layout2D& lay) {
  OverlapSet result;
  OverlapGrid grid(lay);
  const int slots = static_cast<int>(lay.placed.size());
  std::vector<Vec2> los(slots), his(slots);
  for (int f = 0; f < slots; ++f)
    if (lay.placed[f]) triangle_bbox(lay.tri[f], los[f], his[f]);

  for (int f = 0; f < slots; ++f) {
    if (!lay.placed[f]) continue;
    for (FaceId g : grid.candidates(los[f], his[f])) {
      if (g <= f) continue;
      if (!boxes_overlap(los[f], his[f], los[g], his[g])) continue;
      if (triangles_improperly_intersect(lay.tri[f].data(), lay.tri[g].data()))
        result.pairs.emplace_back(f, g);
    }
  }
  return result;
}

OverlapSet subtree_overlap_check(const Layout2D& lay, const UnfoldTree& tree,
                                 const std::vector<FaceId>& touched) {
  std::vector<char> in_set(lay.placed.size(), 0);
  std::vector<FaceId> members;
  for (FaceId f : touched) {
    if (!tree.in_tree(f)) continue;
    for (FaceId s : subtree_faces(tree, f)) {
      if (!in_set[s]) {
        in_set[s] = 1;
        members.push_back(s);
      }
    }
  }
  std::sort(members.begin(), members.end());

  OverlapGrid grid(lay);
  std::set<std::pair<FaceId, FaceId>> found;
  for (FaceId s : members) {
    if (!lay.is_placed(s)) continue;
    Vec2 lo, hi;
    triangle_bbox(lay.tri[s], lo, hi);
    for (FaceId g : grid.candidates(lo, hi)) {
      if (g == s || !lay.is_placed(g)) continue;
      if (in_set[g] && g < s) continue;  // counted from the other side
      Vec2 glo, ghi;
      triangle_bbox(lay.tri[g], glo, ghi);
      if (!boxes_overlap(lo, hi, glo, ghi)) continue;
      if (triangles_improperly_intersect(lay.tri[s].data(), lay.tri[g].data()))
        found.insert({std::min(s, g), std::max(s, g)});
    }
  }
  OverlapSet result;
  result.pairs.assign(found.begin(), found.end());
  return result;
}

}  // namespace punfold
