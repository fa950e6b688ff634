#pragma once

#include <iosfwd>
#include <string>

#include "punfold/mesh.hpp"

namespace punfold {

enum class MeshFormat { OBJ, OFF, STL };

// Parses a mesh from a byte stream in the declared format and builds the
// halfedge structure. STL input (ASCII or binary) is welded by exact
// coordinate match before construction. Throws MeshError on malformed
// input, non-triangular faces, and structural degeneracies.
HalfEdgeMesh load_mesh(std::istream& in, MeshFormat format);

// Format chosen by file extension (.obj/.off/.stl, case-insensitive).
HalfEdgeMesh load_mesh_file(const std::string& path);

// Text output uses round-trip-exact doubles (%.17g): load -> save -> load
// preserves positions bit-exact. Dead slots are compacted away.
void save_obj(const HalfEdgeMesh& mesh, std::ostream& out);
void save_off(const HalfEdgeMesh& mesh, std::ostream& out);
void save_obj_file(const HalfEdgeMesh& mesh, const std::string& path);

}  // namespace punfold
