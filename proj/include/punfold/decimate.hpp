#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "punfold/mesh.hpp"
#include "punfold/quadric.hpp"
#include "punfold/rng.hpp"

namespace punfold {

enum class EdgeSelection { kQuadricCost, kShortestEdge };
enum class VertexPlacement { kQuadricOptimal, kMidpoint };

struct CollapseStrategy {
  EdgeSelection selection = EdgeSelection::kQuadricCost;
  VertexPlacement placement = VertexPlacement::kQuadricOptimal;

  bool operator==(const CollapseStrategy&) const = default;
};

// The three named variants.
inline constexpr CollapseStrategy kStrategyQQ{EdgeSelection::kQuadricCost,
                                              VertexPlacement::kQuadricOptimal};
inline constexpr CollapseStrategy kStrategySEMP{EdgeSelection::kShortestEdge,
                                                VertexPlacement::kMidpoint};
inline constexpr CollapseStrategy kStrategySEQ{EdgeSelection::kShortestEdge,
                                               VertexPlacement::kQuadricOptimal};

// Reversible description of one edge collapse. Beyond the semantic fields,
// the record keeps verbatim copies of every mesh slot the collapse touched,
// so uncollapse_edge restores the exact pre-collapse state bit for bit.
struct CollapseRecord {
  EdgeId edge = kInvalidId;
  VertexId kept = kInvalidId;     // surviving endpoint u
  VertexId removed = kInvalidId;  // removed endpoint v
  std::vector<FaceId> removed_faces;  // one (boundary) or two (interior)
  Vec3 removed_position;
  Vec3 kept_position_before;
  Vec3 kept_position_after;
  std::vector<FaceId> fan;  // faces incident to either endpoint pre-collapse

  std::vector<std::pair<HalfedgeId, Halfedge>> halfedge_slots;
  std::vector<std::pair<VertexId, VertexRec>> vertex_slots;
  std::vector<std::pair<FaceId, FaceRec>> face_slots;
  std::vector<std::pair<EdgeId, EdgeRec>> edge_slots;

  // Alive-count deltas the collapse applied (vertices, edges, faces,
  // boundary edges); uncollapse applies the negation.
  int dv = 0, de = 0, df = 0, dboundary = 0;
};

// Number of faces the approximation should keep:
// round(input_faces/10 + sqrt(input_faces)·(1 + genus)), at least 4.
int target_face_count(int input_faces, int genus);

// Vertex quadric: sum of incident face plane quadrics, each weighted by
// face area. Recomputed from the current mesh (no accumulation state).
Quadric vertex_quadric(const HalfEdgeMesh& mesh, VertexId v);

// Position of the vertex a collapse of `edge` would produce.
Vec3 place_vertex(const HalfEdgeMesh& mesh, EdgeId edge,
                  CollapseStrategy strategy);

// Cost of collapsing `edge`: summed endpoint quadric evaluated at the
// placement point for quadric selection, Euclidean length for
// shortest-edge selection.
double edge_cost(const HalfEdgeMesh& mesh, EdgeId edge,
                 CollapseStrategy strategy);

// Link condition, boundary-pinch guard, minimum face count, and the
// normal-flip guard under the planned placement `position`.
bool is_collapse_valid(const HalfEdgeMesh& mesh, EdgeId edge,
                       const Vec3& position);
// Convenience overload: plans the placement with `strategy` first.
bool is_collapse_valid(const HalfEdgeMesh& mesh, EdgeId edge,
                       CollapseStrategy strategy = kStrategyQQ);

// Collapses `edge`, moving its surviving endpoint to `position`.
// Throws MeshError when the collapse is invalid.
CollapseRecord collapse_edge(HalfEdgeMesh& mesh, EdgeId edge,
                             const Vec3& position);

// Repeatedly collapses the cheapest valid edge until the face count is at
// or below `target` or no valid collapse remains. Ties break toward the
// lower edge id; the run is deterministic (rng reserved for stochastic
// variants, unused by the stock strategies). Records are returned in
// collapse order.
std::vector<CollapseRecord> decimate_to(HalfEdgeMesh& mesh, int target,
                                        CollapseStrategy strategy, Rng& rng);

// Reverses one collapse. Records must be applied strictly in reverse
// collapse order; throws MeshError when applied out of order. Returns the
// ids of the restored faces.
std::vector<FaceId> uncollapse_edge(HalfEdgeMesh& mesh,
                                    const CollapseRecord& record);

// Debug sidecar serialization of a record stack (implementation-defined
// binary layout, not a compatibility surface).
void save_records(std::ostream& out, const std::vector<CollapseRecord>& records);
std::vector<CollapseRecord> load_records(std::istream& in);

}  // namespace punfold
