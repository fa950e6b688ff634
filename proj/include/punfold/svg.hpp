#pragma once

#include <iosfwd>

#include "punfold/layout.hpp"
#include "punfold/mesh.hpp"
#include "punfold/unfold_tree.hpp"

namespace punfold {

// Writes the net as a printable SVG in millimeter units: one polygon per
// placed face, fold (hinge) edges dashed, cut and boundary edges solid.
// `scale` is millimeters per model unit. Output is deterministic: raw
// layout coordinates at full precision inside one declared transform.
void write_svg(std::ostream& out, const HalfEdgeMesh& mesh,
               const UnfoldTree& tree, const Layout2D& lay,
               double scale = 10.0);

}  // namespace punfold
