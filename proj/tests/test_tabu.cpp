#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "punfold/tabu.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace punfold;
using namespace punfold::testsupport;

namespace {

struct Instance {
  HalfEdgeMesh mesh;
  UnfoldTree tree;
  Layout2D lay;
};

Instance fresh_instance(std::uint64_t seed) {
  Instance inst{make_icosphere(1), {}, {}};
  Rng rng(seed);
  inst.tree = initial_unfold_tree(inst.mesh, rng);
  inst.lay = layout(inst.mesh, inst.tree);
  return inst;
}

// Deterministically damages the tree with legal moves until the net
// overlaps itself.
void damage(Instance& inst) {
  for (FaceId f : inst.mesh.alive_face_ids()) {
    if (f == inst.tree.root) continue;
    for (EdgeId e : inst.mesh.face_edges(f)) {
      FaceId g = inst.mesh.opposite_face(f, e);
      if (g == kInvalidId || g == inst.tree.nodes[f].parent) continue;
      if (is_in_subtree(inst.tree, g, f)) continue;
      UnfoldTree t = inst.tree;
      Layout2D l = inst.lay;
      apply_move(t, inst.mesh, f, g);
      relayout_subtree(inst.mesh, t, l, f);
      if (!count_overlaps(l).empty()) {
        inst.tree = std::move(t);
        inst.lay = std::move(l);
        return;
      }
    }
  }
  FAIL("no single move produced an overlap");
}

std::vector<FaceId> path_to_root(const UnfoldTree& tree, FaceId start) {
  std::vector<FaceId> path;
  for (FaceId f = start; f != tree.root; f = tree.nodes[f].parent)
    path.push_back(f);
  return path;
}

int count_after(const Instance& inst, FaceId face, FaceId parent) {
  UnfoldTree t = inst.tree;
  Layout2D l = inst.lay;
  apply_move(t, inst.mesh, face, parent);
  relayout_subtree(inst.mesh, t, l, face);
  return count_overlaps(l).count();
}

bool trees_equal(const UnfoldTree& a, const UnfoldTree& b) {
  if (a.root != b.root || a.nodes.size() != b.nodes.size()) return false;
  for (size_t f = 0; f < a.nodes.size(); ++f)
    if (a.nodes[f].parent != b.nodes[f].parent ||
        a.nodes[f].hinge != b.nodes[f].hinge)
      return false;
  return true;
}

bool layouts_equal(const Layout2D& a, const Layout2D& b) {
  if (a.placed != b.placed) return false;
  for (size_t f = 0; f < a.tri.size(); ++f)
    if (std::memcmp(a.tri[f].data(), b.tri[f].data(), sizeof(Vec2) * 3) != 0)
      return false;
  return true;
}

}  // namespace

TEST_CASE("tabu capacity formula") {
  CHECK(tabu_capacity(12, 3.0) == 6);
  CHECK(tabu_capacity(3, 3.0) == 3);
  CHECK(tabu_capacity(2000, 3.0) == 20);
  CHECK(tabu_capacity(1, 3.0) == 1);
  CHECK(tabu_capacity(100, 1.0) == 1);
  CHECK(tabu_capacity(100, 0.0) == 1);
  for (int f : {5, 48, 245, 4096}) {
    double want = std::floor(3.0 * std::log(f) / std::log(3.0));
    CHECK(tabu_capacity(f, 3.0) == std::max(1, static_cast<int>(want)));
  }
}

TEST_CASE("tabu list is a bounded FIFO") {
  TabuList tabu(2);
  CHECK(tabu.capacity() == 2);
  CHECK(tabu.size() == 0);
  CHECK_FALSE(tabu.contains(1, 2));

  tabu.push(1, 2);
  tabu.push(3, 4);
  CHECK(tabu.size() == 2);
  CHECK(tabu.contains(1, 2));
  CHECK(tabu.contains(3, 4));
  CHECK_FALSE(tabu.contains(2, 1));  // ordered pair, not symmetric

  tabu.push(5, 6);  // evicts the oldest
  CHECK(tabu.size() == 2);
  CHECK_FALSE(tabu.contains(1, 2));
  CHECK(tabu.contains(3, 4));
  CHECK(tabu.contains(5, 6));

  tabu.clear();
  CHECK(tabu.size() == 0);
  CHECK_FALSE(tabu.contains(3, 4));

  TabuList tiny(0);  // capacity clamps to 1
  tiny.push(7, 8);
  tiny.push(9, 10);
  CHECK(tiny.size() == 1);
  CHECK(tiny.contains(9, 10));
}

TEST_CASE("find_move returns a legal move matching the exhaustive contract") {
  Instance inst = fresh_instance(41);
  damage(inst);
  const int before = count_overlaps(inst.lay).count();
  REQUIRE(before > 0);

  FaceId start = count_overlaps(inst.lay).pairs[0].first;
  if (start == inst.tree.root) start = count_overlaps(inst.lay).pairs[0].second;
  REQUIRE(start != inst.tree.root);

  TabuList tabu(8);
  Rng rng(1);
  std::optional<Move> move = find_move(inst.mesh, inst.tree, inst.lay, start, tabu, rng);
  REQUIRE(move.has_value());

  // Legality: on the climb path, mesh-adjacent, acyclic, a real change.
  auto path = path_to_root(inst.tree, start);
  CHECK(std::find(path.begin(), path.end(), move->face) != path.end());
  CHECK(move->old_parent == inst.tree.nodes[move->face].parent);
  CHECK(move->new_parent != move->old_parent);
  CHECK_FALSE(is_in_subtree(inst.tree, move->new_parent, move->face));
  bool adjacent = false;
  for (EdgeId e : inst.mesh.face_edges(move->face))
    if (inst.mesh.opposite_face(move->face, e) == move->new_parent) adjacent = true;
  CHECK(adjacent);

  // Exhaustive candidate enumeration along the path.
  int best = before + 1;
  bool any_improves = false;
  for (FaceId f : path) {
    for (EdgeId e : inst.mesh.face_edges(f)) {
      FaceId g = inst.mesh.opposite_face(f, e);
      if (g == kInvalidId || g == inst.tree.nodes[f].parent) continue;
      if (is_in_subtree(inst.tree, g, f)) continue;
      if (tabu.contains(f, g)) continue;
      int after = count_after(inst, f, g);
      best = std::min(best, after);
      if (after < before) any_improves = true;
    }
  }
  int achieved = count_after(inst, move->face, move->new_parent);
  if (any_improves) {
    CHECK(achieved < before);
  } else {
    CHECK(achieved == best);
  }
}

TEST_CASE("find_move yields nothing when every candidate is tabu") {
  Instance inst = fresh_instance(43);
  damage(inst);
  FaceId start = count_overlaps(inst.lay).pairs[0].first;
  if (start == inst.tree.root) start = count_overlaps(inst.lay).pairs[0].second;

  TabuList tabu(100000);
  for (FaceId f : inst.mesh.alive_face_ids())
    for (EdgeId e : inst.mesh.face_edges(f)) {
      FaceId g = inst.mesh.opposite_face(f, e);
      if (g != kInvalidId) tabu.push(f, g);
    }
  Rng rng(1);
  CHECK_FALSE(find_move(inst.mesh, inst.tree, inst.lay, start, tabu, rng).has_value());
}

TEST_CASE("resolve_overlaps on an already-free net is a no-op") {
  Instance inst = fresh_instance(4);  // seed 4 yields an overlap-free net
  REQUIRE(count_overlaps(inst.lay).empty());
  UnfoldTree tree0 = inst.tree;
  Layout2D lay0 = inst.lay;
  Rng rng(2);
  CHECK(resolve_overlaps(inst.tree, inst.lay, inst.mesh, 50, rng));
  CHECK(trees_equal(inst.tree, tree0));
  CHECK(layouts_equal(inst.lay, lay0));
}

TEST_CASE("resolve_overlaps repairs a damaged net") {
  Instance inst = fresh_instance(53);
  damage(inst);
  REQUIRE(count_overlaps(inst.lay).count() > 0);

  Rng rng(3);
  std::ostringstream trace;
  const long budget = 100L * inst.mesh.face_count();
  bool solved = resolve_overlaps(inst.tree, inst.lay, inst.mesh, budget, rng, &trace);
  REQUIRE(solved);
  CHECK(count_overlaps(inst.lay).empty());
  CHECK(brute_force_overlaps(inst.lay).empty());
  CHECK(audit_tree(inst.tree, inst.mesh).empty());
  CHECK(hinges_bit_equal(inst.mesh, inst.tree, inst.lay));
  CHECK(max_isometry_error(inst.mesh, inst.lay) < 1e-9);
  CHECK_FALSE(trace.str().empty());
}

TEST_CASE("resolve_overlaps with a zero budget fails without touching state") {
  Instance inst = fresh_instance(59);
  damage(inst);
  UnfoldTree tree0 = inst.tree;
  Layout2D lay0 = inst.lay;
  Rng rng(4);
  CHECK_FALSE(resolve_overlaps(inst.tree, inst.lay, inst.mesh, 0, rng));
  CHECK(trees_equal(inst.tree, tree0));
  CHECK(layouts_equal(inst.lay, lay0));
}

TEST_CASE("resolve_overlaps is deterministic in the seed") {
  auto run = [](std::uint64_t solver_seed) {
    Instance inst = fresh_instance(61);
    damage(inst);
    Rng rng(solver_seed);
    bool solved = resolve_overlaps(inst.tree, inst.lay, inst.mesh,
                                   100L * inst.mesh.face_count(), rng);
    return std::make_tuple(solved, std::move(inst.tree), std::move(inst.lay));
  };
  auto [s1, t1, l1] = run(77);
  auto [s2, t2, l2] = run(77);
  CHECK(s1 == s2);
  CHECK(trees_equal(t1, t2));
  CHECK(layouts_equal(l1, l2));
}
