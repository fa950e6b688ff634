#include "punfold/decimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <queue>
#include <set>

namespace punfold {

int target_face_count(int input_faces, int genus) {
  double t = input_faces / 10.0 +
             std::sqrt(static_cast<double>(input_faces)) * (1.0 + genus);
  long r = std::lround(t);
  return static_cast<int>(std::max(4L, r));
}

Quadric vertex_quadric(const HalfEdgeMesh& mesh, VertexId v) {
  Quadric q;
  for (FaceId f : mesh.vertex_faces(v)) {
    Vec3 n = mesh.face_normal(f);
    double len = norm(n);
    if (len <= 0.0) continue;
    Vec3 unit = n * (1.0 / len);
    double dist = -dot(unit, mesh.position(mesh.face_vertices(f)[0]));
    q += Quadric::from_plane(unit, dist, 0.5 * len);
  }
  return q;
}

Vec3 place_vertex(const HalfEdgeMesh& mesh, EdgeId edge,
                  CollapseStrategy strategy) {
  auto ends = mesh.edge_vertices(edge);
  const Vec3& pu = mesh.position(ends[0]);
  const Vec3& pv = mesh.position(ends[1]);
  Vec3 mid = (pu + pv) * 0.5;
  if (strategy.placement == VertexPlacement::kMidpoint) return mid;

  Quadric q = vertex_quadric(mesh, ends[0]) + vertex_quadric(mesh, ends[1]);
  Vec3 opt;
  if (q.minimize(opt)) return opt;
  Vec3 best = pu;
  double best_cost = q.evaluate(pu);
  for (const Vec3& cand : {pv, mid}) {
    double c = q.evaluate(cand);
    if (c < best_cost) {
      best_cost = c;
      best = cand;
    }
  }
  return best;
}

double edge_cost(const HalfEdgeMesh& mesh, EdgeId edge,
                 CollapseStrategy strategy) {
  auto ends = mesh.edge_vertices(edge);
  if (strategy.selection == EdgeSelection::kShortestEdge)
    return distance(mesh.position(ends[0]), mesh.position(ends[1]));
  Quadric q = vertex_quadric(mesh, ends[0]) + vertex_quadric(mesh, ends[1]);
  return q.evaluate(place_vertex(mesh, edge, strategy));
}

bool is_collapse_valid(const HalfEdgeMesh& mesh, EdgeId edge,
                       const Vec3& position) {
  if (edge < 0 || edge >= mesh.edge_slots() || !mesh.edge_alive(edge))
    return false;
  HalfedgeId h = mesh.halfedge_of_edge(edge);
  HalfedgeId t = mesh.twin(h);
  if (mesh.is_boundary_halfedge(h)) std::swap(h, t);
  if (mesh.is_boundary_halfedge(h)) return false;  // isolated edge
  const bool boundary = mesh.is_boundary_halfedge(t);
  const VertexId u = mesh.origin(h);
  const VertexId v = mesh.origin(t);

  const int removed = boundary ? 1 : 2;
  if (mesh.is_closed()) {
    if (mesh.face_count() - removed < 4) return false;
  } else if (mesh.face_count() - removed < 1) {
    return false;
  }

  const HalfedgeId n0 = mesh.next(h), p0 = mesh.next(n0);
  const VertexId w0 = mesh.origin(p0);
  VertexId w1 = kInvalidId;
  if (!boundary) {
    const HalfedgeId n1 = mesh.next(t), p1 = mesh.next(n1);
    w1 = mesh.origin(p1);
    if (w0 == w1) return false;
  } else {
    // Merging the wing edges may not leave an edge with two boundary sides.
    if (mesh.is_boundary_halfedge(mesh.twin(n0)) &&
        mesh.is_boundary_halfedge(mesh.twin(p0)))
      return false;
  }

  // Collapsing an interior edge between two boundary vertices would pinch
  // the surface at the merged vertex.
  if (!boundary && mesh.vertex_on_boundary(u) && mesh.vertex_on_boundary(v))
    return false;

  // Link condition: common neighbors of the endpoints are exactly the
  // apex vertices of the removed faces.
  auto nu = mesh.vertex_neighbors(u);
  auto nv = mesh.vertex_neighbors(v);
  std::set<VertexId> su(nu.begin(), nu.end());
  std::vector<VertexId> common;
  for (VertexId x : nv)
    if (su.count(x)) common.push_back(x);
  if (boundary) {
    if (common.size() != 1 || common[0] != w0) return false;
  } else {
    if (common.size() != 2) return false;
    if (!((common[0] == w0 && common[1] == w1) ||
          (common[0] == w1 && common[1] == w0)))
      return false;
  }

  // Normal-flip guard: no surviving incident face may rotate past 90°
  // when the merged vertex moves to the planned placement.
  const FaceId f0 = mesh.face(h);
  const FaceId f1 = boundary ? kInvalidId : mesh.face(t);
  for (VertexId moved : {u, v}) {
    for (FaceId f : mesh.vertex_faces(moved)) {
      if (f == f0 || f == f1) continue;
      auto fv = mesh.face_vertices(f);
      Vec3 before[3], after[3];
      for (int k = 0; k < 3; ++k) {
        before[k] = mesh.position(fv[k]);
        after[k] = (fv[k] == moved) ? position : before[k];
      }
      Vec3 nb = cross(before[1] - before[0], before[2] - before[0]);
      Vec3 na = cross(after[1] - after[0], after[2] - after[0]);
      if (norm2(nb) == 0.0) continue;
      if (dot(nb, na) <= 0.0) return false;
    }
  }
  return true;
}

bool is_collapse_valid(const HalfEdgeMesh& mesh, EdgeId edge,
                       CollapseStrategy strategy) {
  if (edge < 0 || edge >= mesh.edge_slots() || !mesh.edge_alive(edge))
    return false;
  return is_collapse_valid(mesh, edge, place_vertex(mesh, edge, strategy));
}

namespace {

// Points x's vertex link at a known-alive outgoing halfedge, then prefers a
// boundary halfedge so boundary circulation keeps its starting convention.
void reseat_vertex(HalfEdgeMesh& mesh, VertexId x, HalfedgeId seed) {
  mesh.vertex_rec(x).halfedge = seed;
  for (HalfedgeId hh : mesh.outgoing_halfedges(x)) {
    if (mesh.is_boundary_halfedge(hh)) {
      mesh.vertex_rec(x).halfedge = hh;
      return;
    }
  }
}

}  // namespace

CollapseRecord collapse_edge(HalfEdgeMesh& mesh, EdgeId edge,
                             const Vec3& position) {
  if (!is_collapse_valid(mesh, edge, position))
    throw MeshError("invalid collapse attempted");

  HalfedgeId h = mesh.halfedge_of_edge(edge);
  HalfedgeId t = mesh.twin(h);
  if (mesh.is_boundary_halfedge(h)) std::swap(h, t);
  const bool boundary = mesh.is_boundary_halfedge(t);

  const VertexId u = mesh.origin(h);
  const VertexId v = mesh.origin(t);

  const HalfedgeId n0 = mesh.next(h), p0 = mesh.next(n0);
  const HalfedgeId a0 = mesh.twin(n0), b0 = mesh.twin(p0);
  const VertexId w0 = mesh.origin(p0);
  const FaceId f0 = mesh.face(h);
  const EdgeId dead0 = mesh.edge_of(n0);  // {v, w0}, merged away
  const EdgeId keep0 = mesh.edge_of(p0);  // {w0, u}, survives

  HalfedgeId n1 = kInvalidId, p1 = kInvalidId;
  HalfedgeId a1 = kInvalidId, b1 = kInvalidId;
  VertexId w1 = kInvalidId;
  FaceId f1 = kInvalidId;
  EdgeId dead1 = kInvalidId, keep1 = kInvalidId;
  HalfedgeId bprev = kInvalidId, bnext = kInvalidId;
  if (!boundary) {
    n1 = mesh.next(t);
    p1 = mesh.next(n1);
    a1 = mesh.twin(n1);
    b1 = mesh.twin(p1);
    w1 = mesh.origin(p1);
    f1 = mesh.face(t);
    dead1 = mesh.edge_of(p1);  // {w1, v}
    keep1 = mesh.edge_of(n1);  // {u, w1}
  } else {
    bprev = mesh.prev(t);  // boundary halfedge arriving at v
    bnext = mesh.next(t);  // boundary halfedge leaving u
  }

  const std::vector<HalfedgeId> out_v = mesh.outgoing_halfedges(v);

  CollapseRecord rec;
  rec.edge = edge;
  rec.kept = u;
  rec.removed = v;
  rec.removed_faces =
      boundary ? std::vector<FaceId>{f0} : std::vector<FaceId>{f0, f1};
  rec.removed_position = mesh.position(v);
  rec.kept_position_before = mesh.position(u);
  rec.kept_position_after = position;
  rec.fan = mesh.vertex_faces(u);
  for (FaceId f : mesh.vertex_faces(v))
    if (std::find(rec.fan.begin(), rec.fan.end(), f) == rec.fan.end())
      rec.fan.push_back(f);

  // Snapshot every slot the mutation touches, in ascending id order.
  std::set<HalfedgeId> hs = {h, t, n0, p0, a0, b0};
  if (!boundary)
    hs.insert({n1, p1, a1, b1});
  else
    hs.insert(bprev);
  hs.insert(out_v.begin(), out_v.end());
  std::set<VertexId> vset = {u, v, w0};
  if (!boundary) vset.insert(w1);
  std::set<FaceId> fset = {f0};
  if (!boundary) fset.insert(f1);
  std::set<EdgeId> eset = {edge, dead0, keep0};
  if (!boundary) eset.insert({dead1, keep1});
  for (HalfedgeId id : hs) rec.halfedge_slots.emplace_back(id, mesh.halfedge_rec(id));
  for (VertexId id : vset) rec.vertex_slots.emplace_back(id, mesh.vertex_rec(id));
  for (FaceId id : fset) rec.face_slots.emplace_back(id, mesh.face_rec(id));
  for (EdgeId id : eset) rec.edge_slots.emplace_back(id, mesh.edge_rec(id));

  // Relabel v's outgoing halfedges to originate at u.
  for (HalfedgeId hh : out_v) mesh.halfedge_rec(hh).origin = u;

  // Stitch across the removed face f0; {v,w0} merges into {w0,u}.
  mesh.halfedge_rec(a0).twin = b0;
  mesh.halfedge_rec(b0).twin = a0;
  mesh.halfedge_rec(a0).edge = keep0;
  mesh.edge_rec(keep0).halfedge = mesh.is_boundary_halfedge(b0) ? a0 : b0;
  mesh.edge_rec(dead0).alive = false;

  if (!boundary) {
    // Stitch across f1; {w1,v} merges into {u,w1}.
    mesh.halfedge_rec(a1).twin = b1;
    mesh.halfedge_rec(b1).twin = a1;
    mesh.halfedge_rec(b1).edge = keep1;
    mesh.edge_rec(keep1).halfedge = mesh.is_boundary_halfedge(b1) ? a1 : b1;
    mesh.edge_rec(dead1).alive = false;
  } else {
    // Close the boundary loop over the removed halfedge t.
    mesh.halfedge_rec(bprev).next = bnext;
  }

  mesh.halfedge_rec(h).alive = false;
  mesh.halfedge_rec(t).alive = false;
  mesh.halfedge_rec(n0).alive = false;
  mesh.halfedge_rec(p0).alive = false;
  if (!boundary) {
    mesh.halfedge_rec(n1).alive = false;
    mesh.halfedge_rec(p1).alive = false;
  }
  mesh.edge_rec(edge).alive = false;
  mesh.face_rec(f0).alive = false;
  if (!boundary) mesh.face_rec(f1).alive = false;
  mesh.vertex_rec(v).alive = false;

  mesh.vertex_rec(u).position = position;
  reseat_vertex(mesh, u, b0);
  reseat_vertex(mesh, w0, a0);
  if (!boundary) reseat_vertex(mesh, w1, a1);

  rec.dv = -1;
  rec.de = boundary ? -2 : -3;
  rec.df = boundary ? -1 : -2;
  rec.dboundary = boundary ? -1 : 0;
  mesh.adjust_counts(rec.dv, rec.de, rec.df, rec.dboundary);
  return rec;
}

std::vector<CollapseRecord> decimate_to(HalfEdgeMesh& mesh, int target,
                                        CollapseStrategy strategy, Rng& rng) {
  (void)rng;  // selection and ties are deterministic for the stock strategies
  if (target < 4) target = 4;
  std::vector<CollapseRecord> records;

  struct Entry {
    double cost;
    EdgeId edge;
    std::uint32_t stamp;
  };
  auto worse = [](const Entry& x, const Entry& y) {
    if (x.cost != y.cost) return x.cost > y.cost;
    return x.edge > y.edge;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  std::vector<std::uint32_t> version(mesh.edge_slots(), 0);
  auto push_edge = [&](EdgeId e) {
    heap.push({edge_cost(mesh, e, strategy), e, version[e]});
  };
  for (EdgeId e : mesh.alive_edge_ids()) push_edge(e);

  bool progressed = false;
  while (mesh.face_count() > target) {
    if (heap.empty()) {
      // Validity of distant edges can be revived by earlier collapses; one
      // full refresh per round of progress catches them.
      if (!progressed) break;
      progressed = false;
      for (EdgeId e : mesh.alive_edge_ids()) {
        ++version[e];
        push_edge(e);
      }
      continue;
    }
    Entry top = heap.top();
    heap.pop();
    const EdgeId e = top.edge;
    if (!mesh.edge_alive(e) || top.stamp != version[e]) continue;
    Vec3 pos = place_vertex(mesh, e, strategy);
    if (!is_collapse_valid(mesh, e, pos)) continue;

    CollapseRecord rec = collapse_edge(mesh, e, pos);
    const VertexId u = rec.kept;
    records.push_back(std::move(rec));
    progressed = true;

    // Cost and validity can change for any edge with an endpoint at u or a
    // neighbor of u; refresh them all.
    std::set<EdgeId> touched;
    std::vector<VertexId> centers = {u};
    for (VertexId x : mesh.vertex_neighbors(u)) centers.push_back(x);
    for (VertexId x : centers)
      for (HalfedgeId hh : mesh.outgoing_halfedges(x))
        touched.insert(mesh.edge_of(hh));
    for (EdgeId e2 : touched) {
      ++version[e2];
      push_edge(e2);
    }
  }
  return records;
}

std::vector<FaceId> uncollapse_edge(HalfEdgeMesh& mesh,
                                    const CollapseRecord& record) {
  if (!mesh.vertex_alive(record.kept) || mesh.vertex_alive(record.removed) ||
      !(mesh.position(record.kept) == record.kept_position_after))
    throw MeshError("collapse record applied out of order");
  for (FaceId f : record.removed_faces)
    if (mesh.face_alive(f))
      throw MeshError("collapse record applied out of order");

  for (const auto& [id, slot] : record.halfedge_slots)
    mesh.halfedge_rec(id) = slot;
  for (const auto& [id, slot] : record.vertex_slots) mesh.vertex_rec(id) = slot;
  for (const auto& [id, slot] : record.face_slots) mesh.face_rec(id) = slot;
  for (const auto& [id, slot] : record.edge_slots) mesh.edge_rec(id) = slot;
  mesh.adjust_counts(-record.dv, -record.de, -record.df, -record.dboundary);
  return record.removed_faces;
}

namespace {

void wr_bytes(std::ostream& out, const void* p, size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
void wr_i32(std::ostream& out, std::int32_t v) { wr_bytes(out, &v, 4); }
void wr_u32(std::ostream& out, std::uint32_t v) { wr_bytes(out, &v, 4); }
void wr_u8(std::ostream& out, std::uint8_t v) { wr_bytes(out, &v, 1); }
void wr_f64(std::ostream& out, double v) { wr_bytes(out, &v, 8); }
void wr_vec3(std::ostream& out, const Vec3& v) {
  wr_f64(out, v.x);
  wr_f64(out, v.y);
  wr_f64(out, v.z);
}

void rd_bytes(std::istream& in, void* p, size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw MeshError("truncated collapse record stream");
}
std::int32_t rd_i32(std::istream& in) {
  std::int32_t v;
  rd_bytes(in, &v, 4);
  return v;
}
std::uint32_t rd_u32(std::istream& in) {
  std::uint32_t v;
  rd_bytes(in, &v, 4);
  return v;
}
std::uint8_t rd_u8(std::istream& in) {
  std::uint8_t v;
  rd_bytes(in, &v, 1);
  return v;
}
double rd_f64(std::istream& in) {
  double v;
  rd_bytes(in, &v, 8);
  return v;
}
Vec3 rd_vec3(std::istream& in) {
  Vec3 v;
  v.x = rd_f64(in);
  v.y = rd_f64(in);
  v.z = rd_f64(in);
  return v;
}

}  // namespace

void save_records(std::ostream& out,
                  const std::vector<CollapseRecord>& records) {
  wr_u32(out, static_cast<std::uint32_t>(records.size()));
  for (const CollapseRecord& r : records) {
    wr_i32(out, r.edge);
    wr_i32(out, r.kept);
    wr_i32(out, r.removed);
    wr_u32(out, static_cast<std::uint32_t>(r.removed_faces.size()));
    for (FaceId f : r.removed_faces) wr_i32(out, f);
    wr_vec3(out, r.removed_position);
    wr_vec3(out, r.kept_position_before);
    wr_vec3(out, r.kept_position_after);
    wr_u32(out, static_cast<std::uint32_t>(r.fan.size()));
    for (FaceId f : r.fan) wr_i32(out, f);
    wr_u32(out, static_cast<std::uint32_t>(r.halfedge_slots.size()));
    for (const auto& [id, s] : r.halfedge_slots) {
      wr_i32(out, id);
      wr_i32(out, s.origin);
      wr_i32(out, s.twin);
      wr_i32(out, s.next);
      wr_i32(out, s.face);
      wr_i32(out, s.edge);
      wr_u8(out, s.alive ? 1 : 0);
    }
    wr_u32(out, static_cast<std::uint32_t>(r.vertex_slots.size()));
    for (const auto& [id, s] : r.vertex_slots) {
      wr_i32(out, id);
      wr_vec3(out, s.position);
      wr_i32(out, s.halfedge);
      wr_u8(out, s.alive ? 1 : 0);
    }
    wr_u32(out, static_cast<std::uint32_t>(r.face_slots.size()));
    for (const auto& [id, s] : r.face_slots) {
      wr_i32(out, id);
      wr_i32(out, s.halfedge);
      wr_u8(out, s.alive ? 1 : 0);
    }
    wr_u32(out, static_cast<std::uint32_t>(r.edge_slots.size()));
    for (const auto& [id, s] : r.edge_slots) {
      wr_i32(out, id);
      wr_i32(out, s.halfedge);
      wr_u8(out, s.alive ? 1 : 0);
    }
    wr_i32(out, r.dv);
    wr_i32(out, r.de);
    wr_i32(out, r.df);
    wr_i32(out, r.dboundary);
  }
}

std::vector<CollapseRecord> load_records(std::istream& in) {
  std::vector<CollapseRecord> records(rd_u32(in));
  for (CollapseRecord& r : records) {
    r.edge = rd_i32(in);
    r.kept = rd_i32(in);
    r.removed = rd_i32(in);
    r.removed_faces.resize(rd_u32(in));
    for (FaceId& f : r.removed_faces) f = rd_i32(in);
    r.removed_position = rd_vec3(in);
    r.kept_position_before = rd_vec3(in);
    r.kept_position_after = rd_vec3(in);
    r.fan.resize(rd_u32(in));
    for (FaceId& f : r.fan) f = rd_i32(in);
    r.halfedge_slots.resize(rd_u32(in));
    for (auto& [id, s] : r.halfedge_slots) {
      id = rd_i32(in);
      s.origin = rd_i32(in);
      s.twin = rd_i32(in);
      s.next = rd_i32(in);
      s.face = rd_i32(in);
      s.edge = rd_i32(in);
      s.alive = rd_u8(in) != 0;
    }
    r.vertex_slots.resize(rd_u32(in));
    for (auto& [id, s] : r.vertex_slots) {
      id = rd_i32(in);
      s.position = rd_vec3(in);
      s.halfedge = rd_i32(in);
      s.alive = rd_u8(in) != 0;
    }
    r.face_slots.resize(rd_u32(in));
    for (auto& [id, s] : r.face_slots) {
      id = rd_i32(in);
      s.halfedge = rd_i32(in);
      s.alive = rd_u8(in) != 0;
    }
    r.edge_slots.resize(rd_u32(in));
    for (auto& [id, s] : r.edge_slots) {
      id = rd_i32(in);
      s.halfedge = rd_i32(in);
      s.alive = rd_u8(in) != 0;
    }
    r.dv = rd_i32(in);
    r.de = rd_i32(in);
    r.df = rd_i32(in);
    r.dboundary = rd_i32(in);
  }
  return records;
}

}  // namespace punfold
