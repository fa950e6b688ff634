#pragma once

#include <iosfwd>
#include <vector>

#include "punfold/decimate.hpp"
#include "punfold/layout.hpp"
#include "punfold/mesh.hpp"
#include "punfold/metrics.hpp"
#include "punfold/rng.hpp"
#include "punfold/unfold_tree.hpp"

namespace punfold {

struct PipelineConfig {
  // 0 selects the face-count formula; positive values override it.
  int target_faces = 0;
  // Solver budget for the decimated mesh: factor * face count iterations.
  double initial_budget_factor = 100.0;
  // Solver budget after each uncollapse: factor * current face count.
  double step_budget_factor = 20.0;
  bool allow_boundary = false;
  std::ostream* trace = nullptr;
};

struct UnfoldOutcome {
  UnfoldStatus status = UnfoldStatus::Failed;
  HalfEdgeMesh mesh;
  UnfoldTree tree;      // empty on Failed
  Layout2D layout;      // empty on Failed
  int remaining_uncollapses = 0;
  MetricsReport metrics;
};

// Makes the faces a just-reversed collapse restored into tree nodes. A
// restored face that topologically separates two hinged faces is spliced
// between them (the child keeps its subtree); otherwise it becomes a leaf
// under a random in-tree neighbor. Placements of the collapse fan and all
// dependent subtrees are refreshed. Returns the fan for local checking.
std::vector<FaceId> insert_uncollapsed_faces(UnfoldTree& tree, Layout2D& lay,
                                             const HalfEdgeMesh& mesh,
                                             const CollapseRecord& record,
                                             Rng& rng);

// Full progressive pipeline: decimate to the target, unfold and resolve at
// low resolution, then uncollapse record by record with local repair.
// When a repair fails the previous (overlap-free) state is restored and
// returned as Approximative; Failed only when the low-resolution net
// cannot be resolved at all. Throws MeshError on invalid input.
UnfoldOutcome progressive_unfold(const HalfEdgeMesh& mesh,
                                 CollapseStrategy strategy,
                                 const PipelineConfig& config, Rng& rng);

// Baseline: unfold and resolve at full resolution, no decimation.
// Success or Failed only.
UnfoldOutcome direct_unfold(const HalfEdgeMesh& mesh,
                            const PipelineConfig& config, Rng& rng);

}  // namespace punfold
