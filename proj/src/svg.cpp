#include "punfold/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace punfold {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shorter form for the header metrics, where sub-micrometer digits are
// noise.
std::string num3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

void write_svg(std::ostream& out, const HalfEdgeMesh& mesh,
               const UnfoldTree& tree, const Layout2D& lay, double scale) {
  double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
  double miny = minx, maxy = -minx;
  for (std::size_t f = 0; f < lay.tri.size(); ++f) {
    if (!lay.is_placed(static_cast<FaceId>(f))) continue;
    for (const Vec2& p : lay.tri[f]) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  if (minx > maxx) minx = maxx = miny = maxy = 0.0;

  const double margin = 5.0;  // mm
  const double width = (maxx - minx) * scale + 2.0 * margin;
  const double height = (maxy - miny) * scale + 2.0 * margin;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num3(width)
      << "mm\" height=\"" << num3(height) << "mm\" viewBox=\"0 0 "
      << num3(width) << " " << num3(height) << "\">\n";
  // Model units -> mm, y up -> y down. Polygon points below are raw layout
  // coordinates; stroke widths compensate for the scale.
  out << "<g transform=\"translate(" << num3(margin - minx * scale) << ","
      << num3(margin + maxy * scale) << ") scale(" << num(scale) << ","
      << num(-scale) << ")\">\n";

  const std::string solid_w = num(0.4 / scale);
  const std::string dash_w = num(0.25 / scale);
  const std::string dash_pat = num(2.0 / scale) + "," + num(1.0 / scale);

  for (std::size_t fi = 0; fi < lay.tri.size(); ++fi) {
    const FaceId f = static_cast<FaceId>(fi);
    if (!lay.is_placed(f)) continue;
    const auto& t = lay.tri[fi];
    out << "<polygon points=\"";
    for (int k = 0; k < 3; ++k)
      out << (k ? " " : "") << num(t[k].x) << "," << num(t[k].y);
    out << "\" fill=\"#f2f2f2\" stroke=\"none\"/>\n";
  }

  // Edge k of a face runs between triangle corners k and k+1. A hinge is
  // drawn dashed once, by the child (endpoints are bit-equal on the parent
  // side); cut and boundary edges are drawn solid by every copy.
  for (std::size_t fi = 0; fi < lay.tri.size(); ++fi) {
    const FaceId f = static_cast<FaceId>(fi);
    if (!lay.is_placed(f)) continue;
    const auto& t = lay.tri[fi];
    const auto edges = mesh.face_edges(f);
    for (int k = 0; k < 3; ++k) {
      const EdgeId e = edges[k];
      const bool own_hinge =
          tree.in_tree(f) && f != tree.root && tree.nodes[f].hinge == e;
      bool child_hinge = false;
      if (!own_hinge && tree.in_tree(f))
        for (FaceId c : tree.nodes[f].children)
          if (tree.nodes[c].hinge == e && lay.is_placed(c)) {
            child_hinge = true;
            break;
          }
      if (child_hinge) continue;
      const Vec2& a = t[k];
      const Vec2& b = t[(k + 1) % 3];
      out << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\""
          << num(b.x) << "\" y2=\"" << num(b.y) << "\" stroke=\"#000\"";
      if (own_hinge)
        out << " stroke-width=\"" << dash_w << "\" stroke-dasharray=\""
            << dash_pat << "\"";
      else
        out << " stroke-width=\"" << solid_w << "\"";
      out << "/>\n";
    }
  }

  out << "</g>\n</svg>\n";
}

}  // namespace punfold
