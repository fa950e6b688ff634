#include "punfold/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "punfold/predicates.hpp"
#include "punfold/rng.hpp"

namespace punfold {

std::string to_string(UnfoldStatus status) {
  switch (status) {
    case UnfoldStatus::Success:
      return "success";
    case UnfoldStatus::Approximative:
      return "approximative";
    case UnfoldStatus::Failed:
      return "failed";
  }
  return "failed";
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) {
                             return a.x == b.x && a.y == b.y;
                           }),
               points.end());
  const int n = static_cast<int>(points.size());
  if (n < 3) return points;

  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 &&
           orient2d_sign(hull[k - 2], hull[k - 1], points[i]) <= 0)
      --k;
    hull[k++] = points[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower &&
           orient2d_sign(hull[k - 2], hull[k - 1], points[i]) <= 0)
      --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

OrientedBoundingBox2D min_area_obb(const std::vector<Vec2>& points) {
  std::vector<Vec2> hull = convex_hull(points);
  OrientedBoundingBox2D best;
  if (hull.empty()) return best;
  if (hull.size() == 1) {
    best.center = hull[0];
    return best;
  }

  const int n = static_cast<int>(hull.size());
  double best_area = std::numeric_limits<double>::infinity();
  const int edges = (n == 2) ? 1 : n;
  for (int i = 0; i < edges; ++i) {
    Vec2 d = hull[(i + 1) % n] - hull[i];
    double len = norm(d);
    if (len == 0.0) continue;
    Vec2 u = d * (1.0 / len);
    Vec2 v = perp(u);
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const Vec2& p : hull) {
      double pu = dot(p, u), pv = dot(p, v);
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      vmin = std::min(vmin, pv);
      vmax = std::max(vmax, pv);
    }
    double area = (umax - umin) * (vmax - vmin);
    if (area < best_area) {
      best_area = area;
      double cu = 0.5 * (umin + umax), cv = 0.5 * (vmin + vmax);
      best.center = u * cu + v * cv;
      best.half_w = 0.5 * (umax - umin);
      best.half_h = 0.5 * (vmax - vmin);
      best.angle = std::atan2(u.y, u.x);
    }
  }
  if (best.half_w < best.half_h) {
    std::swap(best.half_w, best.half_h);
    best.angle += std::numbers::pi / 2.0;
  }
  // A box is invariant under a half turn; canonicalize into [0, pi).
  while (best.angle < 0.0) best.angle += std::numbers::pi;
  while (best.angle >= std::numbers::pi) best.angle -= std::numbers::pi;
  return best;
}

namespace {

double layout_area(const Layout2D& lay) {
  double total = 0.0;
  for (std::size_t f = 0; f < lay.tri.size(); ++f) {
    if (!lay.is_placed(static_cast<FaceId>(f))) continue;
    const auto& t = lay.tri[f];
    total += 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
  }
  return total;
}

std::vector<Vec2> layout_points(const Layout2D& lay) {
  std::vector<Vec2> pts;
  pts.reserve(3 * lay.placed_count);
  for (std::size_t f = 0; f < lay.tri.size(); ++f) {
    if (!lay.is_placed(static_cast<FaceId>(f))) continue;
    for (const Vec2& p : lay.tri[f]) pts.push_back(p);
  }
  return pts;
}

}  // namespace

double coverage(const Layout2D& lay) {
  OrientedBoundingBox2D box = min_area_obb(layout_points(lay));
  double net = layout_area(lay);
  if (box.area() <= 0.0 || net <= 0.0)
    throw MeshError("coverage of a degenerate layout");
  return 100.0 * net / box.area();
}

double aspect_ratio(const Layout2D& lay) {
  OrientedBoundingBox2D box = min_area_obb(layout_points(lay));
  if (box.half_h <= 0.0) throw MeshError("aspect ratio of a degenerate layout");
  return box.half_w / box.half_h;
}

namespace {

constexpr std::uint64_t kSamplingSeed = 0x5a4d504c45535254ull;

// Squared distance from p to triangle abc (Ericson, Real-Time Collision
// Detection, closest-point-on-triangle).
double point_triangle_dist2(const Vec3& p, const Vec3& a, const Vec3& b,
                            const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return norm2(ap);

  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return norm2(bp);

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double t = d1 / (d1 - d3);
    return norm2(ap - ab * t);
  }

  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return norm2(cp);

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double t = d2 / (d2 - d6);
    return norm2(ap - ac * t);
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return norm2(bp - (c - b) * t);
  }

  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return norm2(ap - ab * v - ac * w);
}

double point_box_dist2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
  double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
  double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
  return dx * dx + dy * dy + dz * dz;
}

struct TriSoup {
  std::vector<std::array<Vec3, 3>> tris;
  std::vector<Vec3> lo, hi;
};

TriSoup soup_of(const HalfEdgeMesh& mesh) {
  TriSoup soup;
  for (FaceId f : mesh.alive_face_ids()) {
    auto vs = mesh.face_vertices(f);
    std::array<Vec3, 3> t{mesh.position(vs[0]), mesh.position(vs[1]),
                          mesh.position(vs[2])};
    Vec3 lo = t[0], hi = t[0];
    for (int k = 1; k < 3; ++k) {
      lo.x = std::min(lo.x, t[k].x);
      lo.y = std::min(lo.y, t[k].y);
      lo.z = std::min(lo.z, t[k].z);
      hi.x = std::max(hi.x, t[k].x);
      hi.y = std::max(hi.y, t[k].y);
      hi.z = std::max(hi.z, t[k].z);
    }
    soup.tris.push_back(t);
    soup.lo.push_back(lo);
    soup.hi.push_back(hi);
  }
  return soup;
}

std::vector<Vec3> surface_samples(const HalfEdgeMesh& mesh, double density) {
  std::vector<Vec3> pts;
  for (VertexId v : mesh.alive_vertex_ids()) pts.push_back(mesh.position(v));

  std::vector<FaceId> faces = mesh.alive_face_ids();
  if (faces.empty() || density <= 0.0) return pts;
  double total_area = 0.0;
  for (FaceId f : faces) total_area += mesh.face_area(f);
  if (total_area <= 0.0) return pts;
  const double avg_area = total_area / static_cast<double>(faces.size());

  const Rng base(kSamplingSeed);
  for (FaceId f : faces) {
    long n = std::lround(density * mesh.face_area(f) / avg_area);
    if (n <= 0) continue;
    auto vs = mesh.face_vertices(f);
    Vec3 a = mesh.position(vs[0]), b = mesh.position(vs[1]),
         c = mesh.position(vs[2]);
    Rng rng = base.split(static_cast<std::uint64_t>(f));
    for (long i = 0; i < n; ++i) {
      double s = std::sqrt(rng.next_double());
      double t = rng.next_double();
      pts.push_back(a * (1.0 - s) + b * (s * (1.0 - t)) + c * (s * t));
    }
  }
  return pts;
}

// max over samples of the distance to the nearest target triangle.
double one_sided(const std::vector<Vec3>& samples, const TriSoup& target) {
  double worst2 = 0.0;
  std::size_t hint = 0;
  for (const Vec3& p : samples) {
    double best2 = std::numeric_limits<double>::infinity();
    if (hint < target.tris.size()) {
      const auto& t = target.tris[hint];
      best2 = point_triangle_dist2(p, t[0], t[1], t[2]);
    }
    for (std::size_t i = 0; i < target.tris.size(); ++i) {
      if (i == hint) continue;
      if (point_box_dist2(p, target.lo[i], target.hi[i]) >= best2) continue;
      const auto& t = target.tris[i];
      double d2 = point_triangle_dist2(p, t[0], t[1], t[2]);
      if (d2 < best2) {
        best2 = d2;
        hint = i;
      }
    }
    worst2 = std::max(worst2, best2);
  }
  return std::sqrt(worst2);
}

}  // namespace

double hausdorff_relative(const HalfEdgeMesh& original,
                          const HalfEdgeMesh& approx, double density) {
  double diag = original.bbox_diagonal();
  if (diag <= 0.0) throw MeshError("hausdorff of a degenerate mesh");
  TriSoup orig_soup = soup_of(original);
  TriSoup approx_soup = soup_of(approx);
  if (orig_soup.tris.empty() || approx_soup.tris.empty())
    throw MeshError("hausdorff of an empty mesh");
  double forward = one_sided(surface_samples(original, density), approx_soup);
  double backward = one_sided(surface_samples(approx, density), orig_soup);
  return 100.0 * std::max(forward, backward) / diag;
}

}  // namespace punfold
