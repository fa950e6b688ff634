#include "punfold/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace punfold {

namespace {

struct RawMesh {
  std::vector<Vec3> positions;
  std::vector<std::array<int, 3>> faces;
};

HalfEdgeMesh build(RawMesh raw) {
  return HalfEdgeMesh::from_face_list(std::move(raw.positions), raw.faces);
}

RawMesh parse_obj(std::istream& in) {
  RawMesh raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z))
        throw MeshError("OBJ parse failure at line " + std::to_string(lineno));
      raw.positions.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // "v", "v/vt", "v//vn", "v/vt/vn": the first field is the vertex.
        size_t slash = tok.find('/');
        std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
        try {
          int i = std::stoi(head);
          if (i < 0) i = static_cast<int>(raw.positions.size()) + i + 1;
          idx.push_back(i - 1);
        } catch (...) {
          throw MeshError("OBJ parse failure at line " + std::to_string(lineno));
        }
      }
      if (idx.size() != 3)
        throw MeshError("non-triangular face at line " + std::to_string(lineno));
      raw.faces.push_back({idx[0], idx[1], idx[2]});
    }
    // vt/vn/o/g/s/usemtl/mtllib are ignored.
  }
  if (raw.positions.empty() || raw.faces.empty())
    throw MeshError("OBJ contains no mesh data");
  return raw;
}

RawMesh parse_off(std::istream& in) {
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw MeshError("OFF parse failure: unexpected end of file");
  };

  std::string magic = next_token();
  if (magic != "OFF") throw MeshError("OFF parse failure: missing header");
  int nv = 0, nf = 0, ne = 0;
  try {
    nv = std::stoi(next_token());
    nf = std::stoi(next_token());
    ne = std::stoi(next_token());
    (void)ne;
  } catch (...) {
    throw MeshError("OFF parse failure: bad counts");
  }
  RawMesh raw;
  raw.positions.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    Vec3 p;
    try {
      p.x = std::stod(next_token());
      p.y = std::stod(next_token());
      p.z = std::stod(next_token());
    } catch (...) {
      throw MeshError("OFF parse failure: bad vertex");
    }
    raw.positions.push_back(p);
  }
  for (int i = 0; i < nf; ++i) {
    int n;
    try {
      n = std::stoi(next_token());
    } catch (...) {
      throw MeshError("OFF parse failure: bad face");
    }
    if (n != 3) throw MeshError("non-triangular face in OFF input");
    std::array<int, 3> f;
    for (int k = 0; k < 3; ++k) {
      try {
        f[k] = std::stoi(next_token());
      } catch (...) {
        throw MeshError("OFF parse failure: bad face index");
      }
    }
    raw.faces.push_back(f);
  }
  return raw;
}

// Exact-coordinate weld: vertices compare by their three doubles bitwise
// (the corpus is generated, not scanned).
struct VecKey {
  double x, y, z;
  bool operator<(const VecKey& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

RawMesh weld_triangle_soup(const std::vector<std::array<Vec3, 3>>& tris) {
  RawMesh raw;
  std::map<VecKey, int> index;
  for (const auto& t : tris) {
    std::array<int, 3> f;
    for (int k = 0; k < 3; ++k) {
      VecKey key{t[k].x, t[k].y, t[k].z};
      auto [it, inserted] = index.emplace(key, static_cast<int>(raw.positions.size()));
      if (inserted) raw.positions.push_back(t[k]);
      f[k] = it->second;
    }
    raw.faces.push_back(f);
  }
  return raw;
}

RawMesh parse_stl(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 15) throw MeshError("STL parse failure: file too short");

  bool ascii = data.compare(0, 5, "solid") == 0 &&
               data.find("facet") != std::string::npos;
  std::vector<std::array<Vec3, 3>> tris;
  if (ascii) {
    std::istringstream ss(data);
    std::string tok;
    std::array<Vec3, 3> tri;
    int corner = 0;
    while (ss >> tok) {
      if (tok == "vertex") {
        Vec3 p;
        if (!(ss >> p.x >> p.y >> p.z))
          throw MeshError("STL parse failure: bad vertex");
        if (corner > 2) throw MeshError("non-triangular facet in STL input");
        tri[corner++] = p;
      } else if (tok == "endfacet") {
        if (corner != 3) throw MeshError("STL facet with fewer than 3 vertices");
        tris.push_back(tri);
        corner = 0;
      }
    }
  } else {
    if (data.size() < 84) throw MeshError("STL parse failure: truncated header");
    std::uint32_t n;
    std::memcpy(&n, data.data() + 80, 4);
    if (data.size() < 84 + static_cast<size_t>(n) * 50)
      throw MeshError("STL parse failure: truncated body");
    tris.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const char* rec = data.data() + 84 + static_cast<size_t>(i) * 50;
      std::array<Vec3, 3> tri;
      for (int k = 0; k < 3; ++k) {
        float c[3];
        std::memcpy(c, rec + 12 + k * 12, 12);
        tri[k] = {static_cast<double>(c[0]), static_cast<double>(c[1]),
                  static_cast<double>(c[2])};
      }
      tris.push_back(tri);
    }
  }
  if (tris.empty()) throw MeshError("STL contains no facets");
  return weld_triangle_soup(tris);
}

void format_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

// Dense 1-based (OBJ) or 0-based (OFF) indices over alive slots.
std::vector<int> compaction_map(const HalfEdgeMesh& mesh) {
  std::vector<int> map(mesh.vertex_slots(), -1);
  int n = 0;
  for (VertexId v = 0; v < mesh.vertex_slots(); ++v)
    if (mesh.vertex_alive(v)) map[v] = n++;
  return map;
}

}  // namespace

HalfEdgeMesh load_mesh(std::istream& in, MeshFormat format) {
  switch (format) {
    case MeshFormat::OBJ:
      return build(parse_obj(in));
    case MeshFormat::OFF:
      return build(parse_off(in));
    case MeshFormat::STL:
      return build(parse_stl(in));
  }
  throw MeshError("unknown mesh format");
}

HalfEdgeMesh load_mesh_file(const std::string& path) {
  std::string ext;
  auto pos = path.rfind('.');
  if (pos != std::string::npos) ext = path.substr(pos + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  MeshFormat fmt;
  if (ext == "obj")
    fmt = MeshFormat::OBJ;
  else if (ext == "off")
    fmt = MeshFormat::OFF;
  else if (ext == "stl")
    fmt = MeshFormat::STL;
  else
    throw MeshError("unrecognized mesh file extension: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshError("cannot open " + path);
  return load_mesh(in, fmt);
}

void save_obj(const HalfEdgeMesh& mesh, std::ostream& out) {
  auto map = compaction_map(mesh);
  for (VertexId v = 0; v < mesh.vertex_slots(); ++v) {
    if (!mesh.vertex_alive(v)) continue;
    out << "v ";
    format_double(out, mesh.position(v).x);
    out << ' ';
    format_double(out, mesh.position(v).y);
    out << ' ';
    format_double(out, mesh.position(v).z);
    out << '\n';
  }
  for (FaceId f = 0; f < mesh.face_slots(); ++f) {
    if (!mesh.face_alive(f)) continue;
    auto fv = mesh.face_vertices(f);
    out << "f " << map[fv[0]] + 1 << ' ' << map[fv[1]] + 1 << ' ' << map[fv[2]] + 1
        << '\n';
  }
}

void save_off(const HalfEdgeMesh& mesh, std::ostream& out) {
  auto map = compaction_map(mesh);
  out << "OFF\n"
      << mesh.vertex_count() << ' ' << mesh.face_count() << ' ' << mesh.edge_count()
      << '\n';
  for (VertexId v = 0; v < mesh.vertex_slots(); ++v) {
    if (!mesh.vertex_alive(v)) continue;
    format_double(out, mesh.position(v).x);
    out << ' ';
    format_double(out, mesh.position(v).y);
    out << ' ';
    format_double(out, mesh.position(v).z);
    out << '\n';
  }
  for (FaceId f = 0; f < mesh.face_slots(); ++f) {
    if (!mesh.face_alive(f)) continue;
    auto fv = mesh.face_vertices(f);
    out << "3 " << map[fv[0]] << ' ' << map[fv[1]] << ' ' << map[fv[2]] << '\n';
  }
}

void save_obj_file(const HalfEdgeMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MeshError("cannot write " + path);
  save_obj(mesh, out);
}

}  // namespace punfold
