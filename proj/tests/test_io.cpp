#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <sstream>

#include "punfold/mesh_io.hpp"
#include "support/generators.hpp"

using namespace punfold;
using namespace punfold::testsupport;

TEST_CASE("obj save/load round trip is bit exact") {
  for (const HalfEdgeMesh& m :
       {make_tetrahedron(), make_cube(), make_torus(6, 6)}) {
    std::stringstream s;
    save_obj(m, s);
    HalfEdgeMesh back = load_mesh(s, MeshFormat::OBJ);
    CHECK(back == m);
  }
}

TEST_CASE("off save/load round trip is bit exact") {
  HalfEdgeMesh m = make_icosahedron();
  std::stringstream s;
  save_off(m, s);
  HalfEdgeMesh back = load_mesh(s, MeshFormat::OFF);
  CHECK(back == m);
}

TEST_CASE("obj parsing accepts slash-style face references") {
  std::stringstream s(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
      "f 1/1/1 3/3/3 2/2/2\nf 1//1 2//2 4//4\nf 1 4 3\nf 2 3 4\n");
  HalfEdgeMesh m = load_mesh(s, MeshFormat::OBJ);
  CHECK(m.face_count() == 4);
  CHECK(m.is_closed());
}

TEST_CASE("obj rejects a quad face") {
  std::stringstream s("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  CHECK_THROWS_AS(load_mesh(s, MeshFormat::OBJ), MeshError);
}

TEST_CASE("ascii stl welds duplicated corner coordinates") {
  HalfEdgeMesh tetra = make_tetrahedron();
  std::ostringstream stl;
  stl << "solid t\n";
  for (FaceId f : tetra.alive_face_ids()) {
    stl << " facet normal 0 0 0\n  outer loop\n";
    for (VertexId v : tetra.face_vertices(f)) {
      const Vec3& p = tetra.position(v);
      stl << "   vertex " << p.x << " " << p.y << " " << p.z << "\n";
    }
    stl << "  endloop\n endfacet\n";
  }
  stl << "endsolid t\n";
  std::istringstream in(stl.str());
  HalfEdgeMesh m = load_mesh(in, MeshFormat::STL);
  CHECK(m.vertex_count() == 4);
  CHECK(m.edge_count() == 6);
  CHECK(m.face_count() == 4);
}

TEST_CASE("binary stl loads") {
  HalfEdgeMesh tetra = make_tetrahedron();
  std::string bytes(80, '\0');
  const std::uint32_t n = static_cast<std::uint32_t>(tetra.face_count());
  bytes.append(reinterpret_cast<const char*>(&n), 4);
  for (FaceId f : tetra.alive_face_ids()) {
    float zero[3] = {0, 0, 0};
    bytes.append(reinterpret_cast<const char*>(zero), 12);
    for (VertexId v : tetra.face_vertices(f)) {
      const Vec3& p = tetra.position(v);
      float c[3] = {static_cast<float>(p.x), static_cast<float>(p.y),
                    static_cast<float>(p.z)};
      bytes.append(reinterpret_cast<const char*>(c), 12);
    }
    bytes.append("\0\0", 2);
  }
  std::istringstream in(bytes, std::ios::binary);
  HalfEdgeMesh m = load_mesh(in, MeshFormat::STL);
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 4);
}

TEST_CASE("malformed input throws") {
  std::stringstream bad_counts("v 0 0 0\nf 1 2 3\n");
  CHECK_THROWS_AS(load_mesh(bad_counts, MeshFormat::OBJ), MeshError);
  std::stringstream empty("");
  CHECK_THROWS_AS(load_mesh(empty, MeshFormat::OBJ), MeshError);
  std::stringstream off_bad("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  CHECK_THROWS_AS(load_mesh(off_bad, MeshFormat::OFF), MeshError);
}
