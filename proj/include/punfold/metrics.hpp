#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "punfold/layout.hpp"
#include "punfold/mesh.hpp"
#include "punfold/vec.hpp"

namespace punfold {

enum class UnfoldStatus { Success, Approximative, Failed };

std::string to_string(UnfoldStatus status);

// Minimal-area oriented bounding box. By convention half_w >= half_h and
// angle (direction of the w axis) lies in [0, pi).
struct OrientedBoundingBox2D {
  Vec2 center{0.0, 0.0};
  double angle = 0.0;
  double half_w = 0.0;
  double half_h = 0.0;

  double area() const { return 4.0 * half_w * half_h; }
};

struct MetricsReport {
  UnfoldStatus status = UnfoldStatus::Failed;
  double coverage_percent = 0.0;
  double aspect_ratio = 0.0;
  std::optional<double> hausdorff_percent;
  double wall_seconds = 0.0;
};

// Convex hull of a point set, counter-clockwise, collinear points dropped.
// Turn tests use the exact orientation predicate.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Minimal-area oriented box of a point set. The minimum over all
// orientations is attained with one box side collinear with a hull edge,
// so every hull edge direction is tried and the best kept.
OrientedBoundingBox2D min_area_obb(const std::vector<Vec2>& points);

// 100 * (sum of placed triangle areas) / (minimal OBB area).
double coverage(const Layout2D& lay);

// Side ratio (>= 1) of the minimal-area OBB of the layout.
double aspect_ratio(const Layout2D& lay);

// Symmetric Hausdorff distance between two surfaces, estimated from all
// vertices plus `density` area-uniform samples per average-triangle area,
// as a percentage of the original mesh's bounding-box diagonal. The sample
// streams are fixed per face id, so raising the density only adds points.
double hausdorff_relative(const HalfEdgeMesh& original,
                          const HalfEdgeMesh& approx, double density = 10.0);

// Wall-clock stopwatch for report timings.
class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace punfold
