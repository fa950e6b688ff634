#include "punfold/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <queue>
#include <set>

namespace punfold {

namespace {

std::string describe(const char* what, long a, long b = -1) {
  char buf[128];
  if (b >= 0)
    std::snprintf(buf, sizeof(buf), "%s (%ld, %ld)", what, a, b);
  else
    std::snprintf(buf, sizeof(buf), "%s (%ld)", what, a);
  return buf;
}

}  // namespace

HalfEdgeMesh HalfEdgeMesh::from_face_list(std::vector<Vec3> positions,
                                          const std::vector<std::array<int, 3>>& faces) {
  HalfEdgeMesh m;
  const int nv = static_cast<int>(positions.size());
  m.vertices_.resize(positions.size());
  for (int v = 0; v < nv; ++v) {
    m.vertices_[v].position = positions[v];
    m.vertices_[v].alive = true;
  }

  m.faces_.resize(faces.size());
  m.halfedges_.reserve(faces.size() * 3);

  std::map<std::pair<int, int>, HalfedgeId> directed;
  for (FaceId f = 0; f < static_cast<int>(faces.size()); ++f) {
    const auto& fv = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (fv[k] < 0 || fv[k] >= nv)
        throw MeshError(describe("face references missing vertex", fv[k]));
      if (fv[k] == fv[(k + 1) % 3])
        throw MeshError(describe("degenerate face with repeated vertex", f));
    }
    HalfedgeId base = static_cast<HalfedgeId>(m.halfedges_.size());
    for (int k = 0; k < 3; ++k) {
      Halfedge h;
      h.origin = fv[k];
      h.next = base + (k + 1) % 3;
      h.face = f;
      h.alive = true;
      m.halfedges_.push_back(h);
      auto key = std::make_pair(fv[k], fv[(k + 1) % 3]);
      // A repeated directed edge means either a duplicated face or two
      // faces traversing the edge in the same order: non-manifold or
      // inconsistently oriented input.
      if (!directed.emplace(key, base + k).second)
        throw MeshError(describe("non-manifold or inconsistently oriented edge",
                                 key.first, key.second));
    }
    m.faces_[f].halfedge = base;
    m.faces_[f].alive = true;
  }

  // Twin resolution; unmatched directed edges get boundary halfedges.
  for (auto& [key, h] : directed) {
    auto it = directed.find({key.second, key.first});
    if (it != directed.end()) {
      m.halfedges_[h].twin = it->second;
    }
  }
  std::map<VertexId, HalfedgeId> boundary_start;  // origin -> boundary halfedge
  for (auto& [key, h] : directed) {
    if (m.halfedges_[h].twin != kInvalidId) continue;
    Halfedge b;
    b.origin = key.second;
    b.face = kInvalidId;
    b.alive = true;
    HalfedgeId bid = static_cast<HalfedgeId>(m.halfedges_.size());
    b.twin = h;
    m.halfedges_.push_back(b);
    m.halfedges_[h].twin = bid;
    if (!boundary_start.emplace(key.second, bid).second)
      throw MeshError(describe("non-manifold boundary vertex", key.second));
  }
  // Boundary next-links follow the boundary loop.
  for (auto& [v, b] : boundary_start) {
    VertexId to = m.dest(b);
    auto it = boundary_start.find(to);
    if (it == boundary_start.end())
      throw MeshError(describe("open boundary loop at vertex", to));
    m.halfedges_[b].next = it->second;
  }

  // Edge records, one per twin pair.
  for (HalfedgeId h = 0; h < static_cast<int>(m.halfedges_.size()); ++h) {
    if (m.halfedges_[h].edge != kInvalidId || m.halfedges_[h].face == kInvalidId)
      continue;
    EdgeId e = static_cast<EdgeId>(m.edges_.size());
    EdgeRec rec;
    rec.halfedge = h;
    rec.alive = true;
    m.edges_.push_back(rec);
    m.halfedges_[h].edge = e;
    m.halfedges_[m.halfedges_[h].twin].edge = e;
    if (m.halfedges_[m.halfedges_[h].twin].face == kInvalidId) ++m.boundary_edges_;
  }

  // Outgoing halfedge per vertex, preferring interior halfedges; every
  // vertex must be referenced.
  for (HalfedgeId h = 0; h < static_cast<int>(m.halfedges_.size()); ++h) {
    VertexId v = m.halfedges_[h].origin;
    HalfedgeId cur = m.vertices_[v].halfedge;
    if (cur == kInvalidId ||
        (m.is_boundary_halfedge(cur) && m.halfedges_[h].face != kInvalidId))
      m.vertices_[v].halfedge = h;
  }
  for (VertexId v = 0; v < nv; ++v) {
    if (m.vertices_[v].halfedge == kInvalidId)
      throw MeshError(describe("unreferenced vertex", v));
  }

  m.alive_vertices_ = nv;
  m.alive_faces_ = static_cast<int>(faces.size());
  m.alive_edges_ = static_cast<int>(m.edges_.size());
  return m;
}

HalfedgeId HalfEdgeMesh::prev(HalfedgeId h) const {
  if (!is_boundary_halfedge(h)) return next(next(h));
  // Walk around the origin vertex to find the boundary halfedge ending at it.
  VertexId v = origin(h);
  HalfedgeId out = halfedge_of_vertex(v);
  HalfedgeId start = out;
  do {
    HalfedgeId in = twin(out);
    if (is_boundary_halfedge(in) && next(in) == h) return in;
    out = next(in);
  } while (out != start);
  throw MeshError("boundary loop inconsistent in prev()");
}

bool HalfEdgeMesh::edge_is_boundary(EdgeId e) const {
  HalfedgeId h = edges_[e].halfedge;
  return is_boundary_halfedge(h) || is_boundary_halfedge(twin(h));
}

std::array<VertexId, 2> HalfEdgeMesh::edge_vertices(EdgeId e) const {
  HalfedgeId h = edges_[e].halfedge;
  return {origin(h), dest(h)};
}

std::array<VertexId, 3> HalfEdgeMesh::face_vertices(FaceId f) const {
  HalfedgeId h = faces_[f].halfedge;
  return {origin(h), origin(next(h)), origin(next(next(h)))};
}

std::array<EdgeId, 3> HalfEdgeMesh::face_edges(FaceId f) const {
  HalfedgeId h = faces_[f].halfedge;
  return {edge_of(h), edge_of(next(h)), edge_of(next(next(h)))};
}

FaceId HalfEdgeMesh::opposite_face(FaceId f, EdgeId e) const {
  HalfedgeId h = edges_[e].halfedge;
  if (face(h) == f) return face(twin(h));
  if (face(twin(h)) == f) return face(h);
  throw MeshError("edge not incident to face");
}

std::vector<HalfedgeId> HalfEdgeMesh::outgoing_halfedges(VertexId v) const {
  std::vector<HalfedgeId> out;
  HalfedgeId h = halfedge_of_vertex(v);
  HalfedgeId start = h;
  do {
    out.push_back(h);
    h = next(twin(h));
  } while (h != start);
  return out;
}

std::vector<VertexId> HalfEdgeMesh::vertex_neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for (HalfedgeId h : outgoing_halfedges(v)) out.push_back(dest(h));
  return out;
}

std::vector<FaceId> HalfEdgeMesh::vertex_faces(VertexId v) const {
  std::vector<FaceId> out;
  for (HalfedgeId h : outgoing_halfedges(v))
    if (face(h) != kInvalidId) out.push_back(face(h));
  return out;
}

bool HalfEdgeMesh::vertex_on_boundary(VertexId v) const {
  for (HalfedgeId h : outgoing_halfedges(v))
    if (is_boundary_halfedge(h) || is_boundary_halfedge(twin(h))) return true;
  return false;
}

int HalfEdgeMesh::face_valence(FaceId f) const {
  int n = 0;
  for (EdgeId e : face_edges(f))
    if (opposite_face(f, e) != kInvalidId) ++n;
  return n;
}

Vec3 HalfEdgeMesh::face_normal(FaceId f) const {
  auto v = face_vertices(f);
  return cross(position(v[1]) - position(v[0]), position(v[2]) - position(v[0]));
}

double HalfEdgeMesh::face_area(FaceId f) const { return 0.5 * norm(face_normal(f)); }

std::vector<VertexId> HalfEdgeMesh::alive_vertex_ids() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_slots(); ++v)
    if (vertices_[v].alive) out.push_back(v);
  return out;
}

std::vector<EdgeId> HalfEdgeMesh::alive_edge_ids() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edge_slots(); ++e)
    if (edges_[e].alive) out.push_back(e);
  return out;
}

std::vector<FaceId> HalfEdgeMesh::alive_face_ids() const {
  std::vector<FaceId> out;
  for (FaceId f = 0; f < face_slots(); ++f)
    if (faces_[f].alive) out.push_back(f);
  return out;
}

double HalfEdgeMesh::bbox_diagonal() const {
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  bool any = false;
  for (VertexId v = 0; v < vertex_slots(); ++v) {
    if (!vertices_[v].alive) continue;
    const Vec3& p = vertices_[v].position;
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    any = true;
  }
  return any ? norm(hi - lo) : 0.0;
}

MeshValidationReport HalfEdgeMesh::validate() const {
  MeshValidationReport r;
  r.is_triangular = true;   // enforced by construction
  r.is_orientable = true;   // twin directions enforced by construction
  r.boundary_edge_count = boundary_edges_;

  // Vertex manifoldness: the circulation from one outgoing halfedge must
  // visit every face incident to the vertex (a single umbrella).
  r.is_manifold = true;
  std::vector<int> fan_count(vertex_slots(), 0);
  for (FaceId f = 0; f < face_slots(); ++f) {
    if (!faces_[f].alive) continue;
    for (VertexId v : face_vertices(f)) ++fan_count[v];
  }
  for (VertexId v = 0; v < vertex_slots(); ++v) {
    if (!vertices_[v].alive) continue;
    if (static_cast<int>(vertex_faces(v).size()) != fan_count[v]) {
      r.is_manifold = false;
      break;
    }
  }

  // Connected components over face adjacency.
  std::vector<char> seen(face_slots(), 0);
  for (FaceId f0 = 0; f0 < face_slots(); ++f0) {
    if (!faces_[f0].alive || seen[f0]) continue;
    ++r.component_count;
    std::queue<FaceId> q;
    q.push(f0);
    seen[f0] = 1;
    while (!q.empty()) {
      FaceId f = q.front();
      q.pop();
      for (EdgeId e : face_edges(f)) {
        FaceId g = opposite_face(f, e);
        if (g != kInvalidId && !seen[g]) {
          seen[g] = 1;
          q.push(g);
        }
      }
    }
  }

  if (r.is_manifold && r.component_count == 1 && boundary_edges_ == 0) {
    r.genus_known = true;
    r.genus = (2 - vertex_count() + edge_count() - face_count()) / 2;
  }
  return r;
}

double HalfEdgeMesh::average_dual_valence() const {
  if (face_count() == 0) return 0.0;
  long total = 0;
  for (FaceId f : alive_face_ids()) total += face_valence(f);
  return static_cast<double>(total) / face_count();
}

std::string HalfEdgeMesh::audit() const {
  int av = 0, ae = 0, af = 0, abnd = 0;
  for (HalfedgeId h = 0; h < halfedge_slots(); ++h) {
    const Halfedge& he = halfedges_[h];
    if (!he.alive) continue;
    if (he.twin == kInvalidId || !halfedges_[he.twin].alive)
      return describe("halfedge with dead or missing twin", h);
    if (halfedges_[he.twin].twin != h) return describe("twin not involutive", h);
    if (he.next == kInvalidId || !halfedges_[he.next].alive)
      return describe("halfedge with dead or missing next", h);
    if (he.origin == kInvalidId || !vertices_[he.origin].alive)
      return describe("halfedge with dead origin", h);
    // Opposite traversal order across the shared edge.
    if (origin(he.twin) != dest(h) || dest(he.twin) != he.origin)
      return describe("twin pair does not traverse edge oppositely", h);
    if (he.edge == kInvalidId || !edges_[he.edge].alive)
      return describe("halfedge with dead edge", h);
    if (he.face != kInvalidId) {
      if (!faces_[he.face].alive) return describe("halfedge with dead face", h);
      if (next(next(next(h))) != h) return describe("face cycle not length 3", h);
      if (face(next(h)) != he.face) return describe("next leaves face", h);
    }
  }
  for (VertexId v = 0; v < vertex_slots(); ++v) {
    if (!vertices_[v].alive) continue;
    ++av;
    HalfedgeId h = vertices_[v].halfedge;
    if (h == kInvalidId || !halfedges_[h].alive)
      return describe("vertex with dead halfedge pointer", v);
    if (origin(h) != v) return describe("vertex halfedge not outgoing", v);
  }
  for (EdgeId e = 0; e < edge_slots(); ++e) {
    if (!edges_[e].alive) continue;
    ++ae;
    HalfedgeId h = edges_[e].halfedge;
    if (h == kInvalidId || !halfedges_[h].alive)
      return describe("edge with dead halfedge pointer", e);
    if (edge_of(h) != e || edge_of(twin(h)) != e)
      return describe("edge pointer mismatch", e);
    if (is_boundary_halfedge(h) && is_boundary_halfedge(twin(h)))
      return describe("edge with no incident face", e);
    if (edge_is_boundary(e)) ++abnd;
  }
  for (FaceId f = 0; f < face_slots(); ++f) {
    if (!faces_[f].alive) continue;
    ++af;
    HalfedgeId h = faces_[f].halfedge;
    if (h == kInvalidId || !halfedges_[h].alive)
      return describe("face with dead halfedge pointer", f);
    if (face(h) != f) return describe("face halfedge mismatch", f);
  }
  if (av != alive_vertices_) return describe("vertex count mismatch", av, alive_vertices_);
  if (ae != alive_edges_) return describe("edge count mismatch", ae, alive_edges_);
  if (af != alive_faces_) return describe("face count mismatch", af, alive_faces_);
  if (abnd != boundary_edges_)
    return describe("boundary count mismatch", abnd, boundary_edges_);
  return "";
}

bool HalfEdgeMesh::operator==(const HalfEdgeMesh& other) const {
  if (vertices_.size() != other.vertices_.size() ||
      halfedges_.size() != other.halfedges_.size() ||
      faces_.size() != other.faces_.size() || edges_.size() != other.edges_.size())
    return false;
  for (size_t i = 0; i < vertices_.size(); ++i) {
    const auto& a = vertices_[i];
    const auto& b = other.vertices_[i];
    if (a.alive != b.alive) return false;
    if (a.alive && (!(a.position == b.position) || a.halfedge != b.halfedge))
      return false;
  }
  for (size_t i = 0; i < halfedges_.size(); ++i) {
    const auto& a = halfedges_[i];
    const auto& b = other.halfedges_[i];
    if (a.alive != b.alive) return false;
    if (a.alive && (a.origin != b.origin || a.twin != b.twin || a.next != b.next ||
                    a.face != b.face || a.edge != b.edge))
      return false;
  }
  for (size_t i = 0; i < faces_.size(); ++i) {
    if (faces_[i].alive != other.faces_[i].alive) return false;
    if (faces_[i].alive && faces_[i].halfedge != other.faces_[i].halfedge) return false;
  }
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].alive != other.edges_[i].alive) return false;
    if (edges_[i].alive && edges_[i].halfedge != other.edges_[i].halfedge) return false;
  }
  return true;
}

}  // namespace punfold
