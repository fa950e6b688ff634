#include "punfold/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "punfold/overlap.hpp"
#include "punfold/tabu.hpp"

namespace punfold {

namespace {

void require_valid(const MeshValidationReport& r, bool allow_boundary) {
  if (!r.is_triangular) throw MeshError("input mesh is not triangular");
  if (!r.is_manifold) throw MeshError("input mesh is not manifold");
  if (!r.is_orientable) throw MeshError("input mesh is not orientable");
  if (r.component_count != 1)
    throw MeshError("input mesh has more than one connected component");
  if (!allow_boundary && r.boundary_edge_count > 0)
    throw MeshError("input mesh has boundary edges");
}

// Tries to splice `f` between a neighbor g and g's recorded parent when the
// restored face now topologically separates them. Returns true on success.
bool try_splice(UnfoldTree& tree, const HalfEdgeMesh& mesh, FaceId f) {
  const std::array<EdgeId, 3> edges = mesh.face_edges(f);
  for (EdgeId ed : edges) {
    FaceId g = mesh.opposite_face(f, ed);
    if (g == kInvalidId || !tree.in_tree(g) || g == tree.root) continue;
    const EdgeId gh = tree.nodes[g].hinge;
    const FaceId gp = tree.nodes[g].parent;

    if (gh == ed) {
      // g's hinge now leads to f instead of g's recorded parent.
      for (EdgeId ed2 : edges) {
        if (ed2 == ed || mesh.opposite_face(f, ed2) != gp) continue;
        detach_node(tree, g);
        attach_node(tree, f, gp, ed2);
        attach_node(tree, g, f, ed);
        return true;
      }
    } else if (std::find(edges.begin(), edges.end(), gh) != edges.end() &&
               mesh.opposite_face(f, gh) == gp) {
      // g's hinge edge migrated onto f; f borders g's parent through it.
      detach_node(tree, g);
      attach_node(tree, f, gp, gh);
      attach_node(tree, g, f, ed);
      return true;
    }
  }
  return false;
}

void attach_as_leaf(UnfoldTree& tree, const HalfEdgeMesh& mesh, FaceId f,
                    Rng& rng) {
  std::vector<std::pair<FaceId, EdgeId>> candidates;
  for (EdgeId ed : mesh.face_edges(f)) {
    FaceId g = mesh.opposite_face(f, ed);
    if (g != kInvalidId && tree.in_tree(g)) candidates.emplace_back(g, ed);
  }
  if (candidates.empty())
    throw MeshError("restored face has no neighbor in the tree");
  std::sort(candidates.begin(), candidates.end());
  auto [g, ed] = candidates[rng.next_index(static_cast<int>(candidates.size()))];
  attach_node(tree, f, g, ed);
}

MetricsReport make_report(UnfoldStatus status, const Layout2D& lay,
                          double wall) {
  MetricsReport m;
  m.status = status;
  m.wall_seconds = wall;
  if (status != UnfoldStatus::Failed) {
    m.coverage_percent = coverage(lay);
    m.aspect_ratio = aspect_ratio(lay);
  }
  return m;
}

}  // namespace

std::vector<FaceId> insert_uncollapsed_faces(UnfoldTree& tree, Layout2D& lay,
                                             const HalfEdgeMesh& mesh,
                                             const CollapseRecord& record,
                                             Rng& rng) {
  for (FaceId f : record.removed_faces)
    if (!try_splice(tree, mesh, f)) attach_as_leaf(tree, mesh, f, rng);

  std::vector<FaceId> touched = record.fan;
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  // Refresh placements from the minimal set of subtree roots: a touched
  // face with a touched proper ancestor is covered by that ancestor.
  std::vector<char> is_touched(mesh.face_slots(), 0);
  for (FaceId f : touched) is_touched[f] = 1;
  for (FaceId f : touched) {
    bool covered = false;
    for (FaceId a = tree.nodes[f].parent; a != kInvalidId;
         a = tree.nodes[a].parent)
      if (is_touched[a]) {
        covered = true;
        break;
      }
    if (!covered) relayout_subtree(mesh, tree, lay, f);
  }
  return touched;
}

UnfoldOutcome progressive_unfold(const HalfEdgeMesh& mesh,
                                 CollapseStrategy strategy,
                                 const PipelineConfig& config, Rng& rng) {
  WallTimer timer;
  const MeshValidationReport report = mesh.validate();
  require_valid(report, config.allow_boundary);

  Rng decimate_rng = rng.split(rng_stream::kDecimate);
  Rng objective_rng = rng.split(rng_stream::kObjective);
  Rng tabu_rng = rng.split(rng_stream::kTabu);
  Rng insertion_rng = rng.split(rng_stream::kInsertion);

  UnfoldOutcome out;
  out.mesh = mesh;
  const int genus = report.genus_known ? report.genus : 0;
  const int target = config.target_faces > 0
                         ? config.target_faces
                         : target_face_count(mesh.face_count(), genus);
  std::vector<CollapseRecord> records =
      decimate_to(out.mesh, target, strategy, decimate_rng);

  out.tree = initial_unfold_tree(out.mesh, objective_rng);
  out.layout = layout(out.mesh, out.tree);
  const long initial_budget = std::lround(config.initial_budget_factor *
                                          out.mesh.face_count());
  if (!resolve_overlaps(out.tree, out.layout, out.mesh, initial_budget,
                        tabu_rng, config.trace)) {
    out.status = UnfoldStatus::Failed;
    out.tree = UnfoldTree{};
    out.layout = Layout2D{};
    out.remaining_uncollapses = static_cast<int>(records.size());
    out.metrics = make_report(out.status, out.layout, timer.seconds());
    return out;
  }

  for (int i = static_cast<int>(records.size()) - 1; i >= 0; --i) {
    const CollapseRecord& rec = records[i];
    UnfoldTree tree_snapshot = out.tree;
    Layout2D lay_snapshot = out.layout;

    uncollapse_edge(out.mesh, rec);
    std::vector<FaceId> touched =
        insert_uncollapsed_faces(out.tree, out.layout, out.mesh, rec,
                                 insertion_rng);
    bool clean = subtree_overlap_check(out.layout, out.tree, touched).empty();
    if (!clean) {
      const long step_budget =
          std::lround(config.step_budget_factor * out.mesh.face_count());
      clean = resolve_overlaps(out.tree, out.layout, out.mesh, step_budget,
                               tabu_rng, config.trace);
    }
    if (!clean) {
      // Restore the last overlap-free state: the collapse is deterministic
      // given the recorded placement, so re-collapsing reproduces the mesh
      // the snapshots were taken against.
      collapse_edge(out.mesh, rec.edge, rec.kept_position_after);
      out.tree = std::move(tree_snapshot);
      out.layout = std::move(lay_snapshot);
      out.status = UnfoldStatus::Approximative;
      out.remaining_uncollapses = i + 1;
      out.metrics = make_report(out.status, out.layout, 0.0);
      out.metrics.hausdorff_percent = hausdorff_relative(mesh, out.mesh);
      out.metrics.wall_seconds = timer.seconds();
      return out;
    }
  }

  out.status = UnfoldStatus::Success;
  out.remaining_uncollapses = 0;
  out.metrics = make_report(out.status, out.layout, timer.seconds());
  return out;
}

UnfoldOutcome direct_unfold(const HalfEdgeMesh& mesh,
                            const PipelineConfig& config, Rng& rng) {
  WallTimer timer;
  require_valid(mesh.validate(), config.allow_boundary);

  Rng objective_rng = rng.split(rng_stream::kObjective);
  Rng tabu_rng = rng.split(rng_stream::kTabu);

  UnfoldOutcome out;
  out.mesh = mesh;
  out.tree = initial_unfold_tree(out.mesh, objective_rng);
  out.layout = layout(out.mesh, out.tree);
  const long budget =
      std::lround(config.initial_budget_factor * out.mesh.face_count());
  if (resolve_overlaps(out.tree, out.layout, out.mesh, budget, tabu_rng,
                       config.trace)) {
    out.status = UnfoldStatus::Success;
  } else {
    out.status = UnfoldStatus::Failed;
    out.tree = UnfoldTree{};
    out.layout = Layout2D{};
  }
  out.metrics = make_report(out.status, out.layout, timer.seconds());
  return out;
}

}  // namespace punfold
