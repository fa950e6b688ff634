#pragma once

#include "punfold/vec.hpp"

namespace punfold {

// Exact-sign orientation test: positive when a, b, c wind counterclockwise,
// negative when clockwise, zero when collinear. A filtered double
// evaluation falls back to floating-point expansion arithmetic, so the
// returned sign is exact for all double inputs.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

inline int orient2d_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  double d = orient2d(a, b, c);
  return (d > 0.0) - (d < 0.0);
}

// Exact test whether the interiors of two triangles intersect (a shared
// edge or point contact is not an intersection). Degenerate triangles have
// empty interiors.
bool triangles_improperly_intersect(const Vec2 t1[3], const Vec2 t2[3]);

}  // namespace punfold
