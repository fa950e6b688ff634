#pragma once

#include <deque>
#include <iosfwd>
#include <optional>
#include <utility>

#include "punfold/layout.hpp"
#include "punfold/mesh.hpp"
#include "punfold/overlap.hpp"
#include "punfold/rng.hpp"
#include "punfold/unfold_tree.hpp"

namespace punfold {

// Tabu memory m = floor(val · log_val(F)), at least 1.
int tabu_capacity(int face_count, double avg_valence);

struct Move {
  FaceId face = kInvalidId;
  FaceId old_parent = kInvalidId;
  FaceId new_parent = kInvalidId;
};

// Bounded FIFO of forbidden (face, parent) reattachments. A move is tabu
// when it would re-attach a face to the parent it was last detached from.
class TabuList {
 public:
  explicit TabuList(int capacity) : capacity_(capacity < 1 ? 1 : capacity) {}

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(items_.size()); }
  bool contains(FaceId face, FaceId parent) const;
  void push(FaceId face, FaceId parent);
  void clear() { items_.clear(); }

 private:
  int capacity_;
  std::deque<std::pair<FaceId, FaceId>> items_;
};

// Climbs from start_face toward the root. At each face all non-tabu
// reattachments to mesh-adjacent non-descendant parents are evaluated; the
// first move that strictly lowers the total overlap count is returned.
// When nothing improves by the root, the relative-best move seen on the
// way is returned (ties toward lower face id, then lower parent id); none
// only when every candidate everywhere is tabu.
std::optional<Move> find_move(const HalfEdgeMesh& mesh, const UnfoldTree& tree,
                              const Layout2D& lay, FaceId start_face,
                              const TabuList& tabu, Rng& rng);

// Tabu search until the layout is overlap-free or the iteration budget is
// spent. Each iteration reroots to a uniformly random face, picks a random
// overlapping face, finds a move (clearing the tabu list when every
// candidate is tabu), applies it, records its inverse as tabu, and relays
// out only the moved subtree. Optional trace: one line per iteration.
bool resolve_overlaps(UnfoldTree& tree, Layout2D& lay,
                      const HalfEdgeMesh& mesh, long budget, Rng& rng,
                      std::ostream* trace = nullptr);

}  // namespace punfold
