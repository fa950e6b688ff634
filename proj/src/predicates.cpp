#include "punfold/predicates.hpp"

#include <cmath>

// Exact orientation predicate after Shewchuk's "Adaptive Precision
// Floating-Point Arithmetic and Fast Robust Geometric Predicates".
// Requires strict IEEE-754 double evaluation (no FMA contraction, no
// extended intermediate precision); the build disables contraction.

namespace punfold {
namespace {

constexpr double kSplitter = 134217729.0;             // 2^27 + 1
constexpr double kEpsilon = 1.1102230246251565e-16;   // 2^-53
constexpr double kCcwErrBoundA = (3.0 + 16.0 * kEpsilon) * kEpsilon;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bv = x - a;
  double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& x, double& y) {
  x = a - b;
  double bv = a - x;
  double av = x + bv;
  y = (a - av) + (bv - b);
}

inline void split(double a, double& hi, double& lo) {
  double c = kSplitter * a;
  hi = c - (c - a);
  lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  double err = x - ahi * bhi;
  err -= alo * bhi;
  err -= ahi * blo;
  y = alo * blo - err;
}

inline void two_one_diff(double a1, double a0, double b, double& x2,
                         double& x1, double& x0) {
  double i;
  two_diff(a0, b, i, x0);
  two_sum(a1, i, x2, x1);
}

inline void two_two_diff(double a1, double a0, double b1, double b0,
                         double& x3, double& x2, double& x1, double& x0) {
  double j, k;
  two_one_diff(a1, a0, b0, j, k, x0);
  two_one_diff(j, k, b1, x3, x2, x1);
}

inline void fast_two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  y = b - (x - a);
}

// Sums two nonoverlapping expansions, dropping zero components.
int fast_expansion_sum_zeroelim(int elen, const double* e, int flen,
                                const double* f, double* h) {
  double q, qnew, hh;
  int eindex = 0, findex = 0, hindex = 0;
  double enow = e[0];
  double fnow = f[0];
  if ((fnow > enow) == (fnow > -enow)) {
    q = enow;
    enow = e[++eindex];
  } else {
    q = fnow;
    fnow = f[++findex];
  }
  if ((eindex < elen) && (findex < flen)) {
    if ((fnow > enow) == (fnow > -enow)) {
      fast_two_sum(enow, q, qnew, hh);
      enow = e[++eindex];
    } else {
      fast_two_sum(fnow, q, qnew, hh);
      fnow = f[++findex];
    }
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
    while ((eindex < elen) && (findex < flen)) {
      if ((fnow > enow) == (fnow > -enow)) {
        two_sum(q, enow, qnew, hh);
        enow = e[++eindex];
      } else {
        two_sum(q, fnow, qnew, hh);
        fnow = f[++findex];
      }
      q = qnew;
      if (hh != 0.0) h[hindex++] = hh;
    }
  }
  while (eindex < elen) {
    two_sum(q, enow, qnew, hh);
    enow = e[++eindex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  while (findex < flen) {
    two_sum(q, fnow, qnew, hh);
    fnow = f[++findex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  if ((q != 0.0) || (hindex == 0)) h[hindex++] = q;
  return hindex;
}

double orient2d_exact(const Vec2& pa, const Vec2& pb, const Vec2& pc) {
  double axby1, axby0, axcy1, axcy0, bxcy1, bxcy0;
  double bxay1, bxay0, cxay1, cxay0, cxby1, cxby0;
  double aterms[4], bterms[4], cterms[4];
  double v[8], w[12];

  two_product(pa.x, pb.y, axby1, axby0);
  two_product(pa.x, pc.y, axcy1, axcy0);
  two_two_diff(axby1, axby0, axcy1, axcy0, aterms[3], aterms[2], aterms[1],
               aterms[0]);

  two_product(pb.x, pc.y, bxcy1, bxcy0);
  two_product(pb.x, pa.y, bxay1, bxay0);
  two_two_diff(bxcy1, bxcy0, bxay1, bxay0, bterms[3], bterms[2], bterms[1],
               bterms[0]);

  two_product(pc.x, pa.y, cxay1, cxay0);
  two_product(pc.x, pb.y, cxby1, cxby0);
  two_two_diff(cxay1, cxay0, cxby1, cxby0, cterms[3], cterms[2], cterms[1],
               cterms[0]);

  int vlength = fast_expansion_sum_zeroelim(4, aterms, 4, bterms, v);
  int wlength = fast_expansion_sum_zeroelim(vlength, v, 4, cterms, w);
  return w[wlength - 1];
}

}  // namespace

double orient2d(const Vec2& pa, const Vec2& pb, const Vec2& pc) {
  double detleft = (pa.x - pc.x) * (pb.y - pc.y);
  double detright = (pa.y - pc.y) * (pb.x - pc.x);
  double det = detleft - detright;
  double detsum;

  if (detleft > 0.0) {
    if (detright <= 0.0) return det;
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det;
    detsum = -detleft - detright;
  } else {
    return det;
  }

  double errbound = kCcwErrBoundA * detsum;
  if ((det >= errbound) || (-det >= errbound)) return det;
  return orient2d_exact(pa, pb, pc);
}

namespace {

// True when the line through edge (a, b) of a CCW triangle weakly separates:
// the triangle lies in the closed left half-plane by construction, so the
// interiors are disjoint if the other triangle lies in the closed right one.
bool edge_separates(const Vec2& a, const Vec2& b, const Vec2 other[3]) {
  return orient2d_sign(a, b, other[0]) <= 0 &&
         orient2d_sign(a, b, other[1]) <= 0 &&
         orient2d_sign(a, b, other[2]) <= 0;
}

}  // namespace

bool triangles_improperly_intersect(const Vec2 t1[3], const Vec2 t2[3]) {
  int s1 = orient2d_sign(t1[0], t1[1], t1[2]);
  int s2 = orient2d_sign(t2[0], t2[1], t2[2]);
  if (s1 == 0 || s2 == 0) return false;  // degenerate: empty interior

  Vec2 p[3] = {t1[0], t1[1], t1[2]};
  Vec2 q[3] = {t2[0], t2[1], t2[2]};
  if (s1 < 0) std::swap(p[1], p[2]);
  if (s2 < 0) std::swap(q[1], q[2]);

  // Separating-axis test over the six edge lines; for convex polygons a
  // weakly separating line exists among them iff the interiors are disjoint.
  for (int i = 0; i < 3; ++i) {
    if (edge_separates(p[i], p[(i + 1) % 3], q)) return false;
    if (edge_separates(q[i], q[(i + 1) % 3], p)) return false;
  }
  return true;
}

}  // namespace punfold
