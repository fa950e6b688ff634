#pragma once

#include <cmath>

#include "punfold/vec.hpp"

namespace punfold {

// Symmetric 4x4 quadric form. q(p) = p~ᵀ Q p~ with p~ = (x, y, z, 1),
// accumulating weighted squared point-to-plane distances. Coefficients are
// the upper triangle of
//   [ a b c d ]
//   [ b e f g ]
//   [ c f h i ]
//   [ d g i j ]
struct Quadric {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
  double f = 0.0, g = 0.0, h = 0.0, i = 0.0, j = 0.0;

  // Quadric of the plane n·x + dist = 0 (n unit length), scaled by weight.
  static Quadric from_plane(const Vec3& n, double dist, double weight) {
    Quadric q;
    q.a = weight * n.x * n.x;
    q.b = weight * n.x * n.y;
    q.c = weight * n.x * n.z;
    q.d = weight * n.x * dist;
    q.e = weight * n.y * n.y;
    q.f = weight * n.y * n.z;
    q.g = weight * n.y * dist;
    q.h = weight * n.z * n.z;
    q.i = weight * n.z * dist;
    q.j = weight * dist * dist;
    return q;
  }

  Quadric& operator+=(const Quadric& o) {
    a += o.a; b += o.b; c += o.c; d += o.d; e += o.e;
    f += o.f; g += o.g; h += o.h; i += o.i; j += o.j;
    return *this;
  }

  Quadric operator+(const Quadric& o) const {
    Quadric q = *this;
    q += o;
    return q;
  }

  double evaluate(const Vec3& p) const {
    return a * p.x * p.x + e * p.y * p.y + h * p.z * p.z +
           2.0 * (b * p.x * p.y + c * p.x * p.z + f * p.y * p.z) +
           2.0 * (d * p.x + g * p.y + i * p.z) + j;
  }

  // Solves ∇q = 0, i.e. A p = -(d, g, i) with A the upper-left 3x3 block.
  // Returns false when the system is near singular: |det| < 1e-12 · s³,
  // where s is the largest absolute entry of A.
  bool minimize(Vec3& out) const {
    double det = a * (e * h - f * f) - b * (b * h - f * c) +
                 c * (b * f - e * c);
    double s = 0.0;
    for (double v : {a, b, c, e, f, h}) s = std::max(s, std::fabs(v));
    if (std::fabs(det) < 1e-12 * s * s * s || s == 0.0) return false;
    double rx = -d, ry = -g, rz = -i;
    double inv = 1.0 / det;
    out.x = inv * (rx * (e * h - f * f) - b * (ry * h - f * rz) +
                   c * (ry * f - e * rz));
    out.y = inv * (a * (ry * h - f * rz) - rx * (b * h - f * c) +
                   c * (b * rz - ry * c));
    out.z = inv * (a * (e * rz - ry * f) - b * (b * rz - ry * c) +
                   rx * (b * f - e * c));
    return true;
  }
};

}  // namespace punfold
