#include "punfold/tabu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <set>

#include "punfold/predicates.hpp"

namespace punfold {

int tabu_capacity(int face_count, double avg_valence) {
  if (face_count < 2 || avg_valence <= 1.0) return 1;
  double m = avg_valence * std::log(static_cast<double>(face_count)) /
             std::log(avg_valence);
  long f = static_cast<long>(std::floor(m));
  return static_cast<int>(std::max(1L, f));
}

bool TabuList::contains(FaceId face, FaceId parent) const {
  for (const auto& it : items_)
    if (it.first == face && it.second == parent) return true;
  return false;
}

void TabuList::push(FaceId face, FaceId parent) {
  if (static_cast<int>(items_.size()) == capacity_) items_.pop_front();
  items_.emplace_back(face, parent);
}

namespace {

inline bool boxes_overlap(const Vec2& lo1, const Vec2& hi1, const Vec2& lo2,
                          const Vec2& hi2) {
  return lo1.x < hi2.x && lo2.x < hi1.x && lo1.y < hi2.y && lo2.y < hi1.y;
}

// Maintains the overlap set of a tree/layout pair across moves. Candidate
// moves are evaluated by placing the subtree at its prospective hinge (the
// same construction apply uses) and re-testing it against the static rest.
class OverlapSolver {
 public:
  OverlapSolver(const HalfEdgeMesh& mesh, UnfoldTree& tree, Layout2D& lay)
      : mesh_(mesh),
        tree_(tree),
        lay_(lay),
        partners_(mesh.face_slots()),
        scratch_(mesh.face_slots()) {
    grid_ = std::make_unique<OverlapGrid>(lay_);
    for (auto [a, b] : count_overlaps(lay_).pairs) add_pair(a, b);
  }

  int total() const { return static_cast<int>(pairs_.size()); }

  std::vector<FaceId> overlapping_faces() const {
    std::vector<FaceId> out;
    for (int f = 0; f < static_cast<int>(partners_.size()); ++f)
      if (!partners_[f].empty()) out.push_back(f);
    return out;
  }

  std::optional<Move> find_move(FaceId start, const TabuList& tabu) {
    const int current = total();
    std::optional<Move> best;
    int best_total = std::numeric_limits<int>::max();
    for (FaceId x = start; x != tree_.root; x = tree_.nodes[x].parent) {
      std::vector<FaceId> sub = subtree_faces(tree_, x);
      std::vector<char> in_sub(mesh_.face_slots(), 0);
      for (FaceId s : sub) in_sub[s] = 1;
      int cross_old = 0;
      for (FaceId s : sub)
        for (FaceId p : partners_[s])
          if (!in_sub[p]) ++cross_old;

      for (EdgeId e : mesh_.face_edges(x)) {
        FaceId g = mesh_.opposite_face(x, e);
        if (g == kInvalidId || g == tree_.nodes[x].parent) continue;
        if (!tree_.in_tree(g) || in_sub[g]) continue;  // acyclicity guard
        if (tabu.contains(x, g)) continue;
        int result = current - cross_old + cross_after(x, g, e, in_sub);
        if (result < current) return Move{x, tree_.nodes[x].parent, g};
        if (result < best_total ||
            (result == best_total && best &&
             std::make_pair(x, g) <
                 std::make_pair(best->face, best->new_parent))) {
          best_total = result;
          best = Move{x, tree_.nodes[x].parent, g};
        }
      }
    }
    return best;
  }

  void apply(const Move& m) {
    std::vector<FaceId> sub = subtree_faces(tree_, m.face);
    std::vector<char> in_sub(mesh_.face_slots(), 0);
    for (FaceId s : sub) in_sub[s] = 1;

    for (FaceId s : sub) {
      std::vector<FaceId> ps(partners_[s].begin(), partners_[s].end());
      for (FaceId p : ps) {
        pairs_.erase({std::min(s, p), std::max(s, p)});
        partners_[p].erase(s);
      }
      partners_[s].clear();
    }

    apply_move(tree_, mesh_, m.face, m.new_parent);
    relayout_subtree(mesh_, tree_, lay_, m.face);
    grid_ = std::make_unique<OverlapGrid>(lay_);

    for (FaceId s : sub) {
      Vec2 lo, hi;
      triangle_bbox(lay_.tri[s], lo, hi);
      for (FaceId o : grid_->candidates(lo, hi)) {
        if (o == s || !lay_.is_placed(o)) continue;
        if (in_sub[o] && o < s) continue;  // each in-subtree pair once
        Vec2 olo, ohi;
        triangle_bbox(lay_.tri[o], olo, ohi);
        if (!boxes_overlap(lo, hi, olo, ohi)) continue;
        if (triangles_improperly_intersect(lay_.tri[s].data(),
                                           lay_.tri[o].data()))
          add_pair(s, o);
      }
    }
  }

 private:
  void add_pair(FaceId a, FaceId b) {
    if (a > b) std::swap(a, b);
    if (pairs_.insert({a, b}).second) {
      partners_[a].insert(b);
      partners_[b].insert(a);
    }
  }

  // Overlaps between the subtree of `face` placed under `new_parent` via
  // `hinge` and the faces outside the subtree.
  int cross_after(FaceId face, FaceId new_parent, EdgeId hinge,
                  const std::vector<char>& in_sub) {
    order_.clear();
    place_subtree(mesh_, tree_, lay_, face, new_parent, hinge, scratch_,
                  order_);
    int count = 0;
    for (FaceId s : order_) {
      Vec2 lo, hi;
      triangle_bbox(scratch_[s], lo, hi);
      for (FaceId o : grid_->candidates(lo, hi)) {
        if (in_sub[o] || !lay_.is_placed(o)) continue;
        Vec2 olo, ohi;
        triangle_bbox(lay_.tri[o], olo, ohi);
        if (!boxes_overlap(lo, hi, olo, ohi)) continue;
        if (triangles_improperly_intersect(scratch_[s].data(),
                                           lay_.tri[o].data()))
          ++count;
      }
    }
    return count;
  }

  const HalfEdgeMesh& mesh_;
  UnfoldTree& tree_;
  Layout2D& lay_;
  std::set<std::pair<FaceId, FaceId>> pairs_;
  std::vector<std::set<FaceId>> partners_;
  std::unique_ptr<OverlapGrid> grid_;
  std::vector<std::array<Vec2, 3>> scratch_;
  std::vector<FaceId> order_;
};

}  // namespace

std::optional<Move> find_move(const HalfEdgeMesh& mesh, const UnfoldTree& tree,
                              const Layout2D& lay, FaceId start_face,
                              const TabuList& tabu, Rng& rng) {
  (void)rng;  // reserved: candidate evaluation is deterministic
  UnfoldTree tree_copy = tree;
  Layout2D lay_copy = lay;
  OverlapSolver solver(mesh, tree_copy, lay_copy);
  return solver.find_move(start_face, tabu);
}

bool resolve_overlaps(UnfoldTree& tree, Layout2D& lay,
                      const HalfEdgeMesh& mesh, long budget, Rng& rng,
                      std::ostream* trace) {
  OverlapSolver solver(mesh, tree, lay);
  if (solver.total() == 0) return true;

  TabuList tabu(tabu_capacity(mesh.face_count(), mesh.average_dual_valence()));
  const std::vector<FaceId> faces = mesh.alive_face_ids();
  for (long iter = 0; iter < budget; ++iter) {
    if (solver.total() == 0) return true;
    reroot(tree, faces[rng.next_index(static_cast<int>(faces.size()))]);
    std::vector<FaceId> overlapping = solver.overlapping_faces();
    FaceId start =
        overlapping[rng.next_index(static_cast<int>(overlapping.size()))];
    std::optional<Move> mv = solver.find_move(start, tabu);
    if (!mv) {
      // Everything on the path is tabu; forget and retry.
      tabu.clear();
      if (trace) *trace << iter << " tabu-clear at " << start << "\n";
      continue;
    }
    tabu.push(mv->face, mv->old_parent);
    solver.apply(*mv);
    if (trace)
      *trace << iter << " move " << mv->face << " " << mv->old_parent << " -> "
             << mv->new_parent << " overlaps " << solver.total() << "\n";
  }
  return solver.total() == 0;
}

}  // namespace punfold
