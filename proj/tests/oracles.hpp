// Test-only oracles, independent of the library code paths they check.
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "selflink/curve.hpp"
#include "selflink/vec3.hpp"

namespace selflink::testing {

// Central finite difference of eval; step 1e-5 gives ~1e-9 relative error
// on the built-in curves.
inline Vec3 fd_first_derivative(const Curve& c, double t, double h = 1e-5) {
  return (c.eval(t + h) - c.eval(t - h)) / (2.0 * h);
}

inline Vec3 fd_of_order(const Curve& c, double t, int order, double h = 1e-5) {
  if (order == 1) return fd_first_derivative(c, t, h);
  return (c.derivative(t + h, order - 1) - c.derivative(t - h, order - 1)) / (2.0 * h);
}

// Fourth-order central stencils from eval alone.
inline Vec3 fd4_derivative(const Curve& c, double t, int order, double h = 1e-3) {
  auto f = [&](double dt) { return c.eval(t + dt); };
  switch (order) {
    case 1:
      return (-1.0 * f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + 1.0 * f(-2 * h)) / (12.0 * h);
    case 2:
      return (-1.0 * f(2 * h) + 16.0 * f(h) - 30.0 * f(0) + 16.0 * f(-h) -
              1.0 * f(-2 * h)) /
             (12.0 * h * h);
    default:
      return (1.0 * f(-3 * h) / 8.0 - 1.0 * f(-2 * h) + 13.0 * f(-h) / 8.0 -
              13.0 * f(h) / 8.0 + 1.0 * f(2 * h) - 1.0 * f(3 * h) / 8.0) /
             (h * h * h);
  }
}

// kappa and tau evaluated through the same formulas as the library but
// fed with 4th-order finite-difference derivatives of eval.
inline double fd4_curvature(const Curve& c, double t) {
  const Vec3 d1 = fd4_derivative(c, t, 1);
  const Vec3 d2 = fd4_derivative(c, t, 2);
  const double n = d1.norm();
  return cross(d1, d2).norm() / (n * n * n);
}

inline double fd4_torsion(const Curve& c, double t) {
  const Vec3 d1 = fd4_derivative(c, t, 1);
  const Vec3 d2 = fd4_derivative(c, t, 2);
  const Vec3 d3 = fd4_derivative(c, t, 3);
  const Vec3 cr = cross(d1, d2);
  return dot(cr, d3) / cr.norm_squared();
}

// Brute-force signed crossing counts on plain polylines: no curve-level
// refinement, no retries, no bounding boxes. Intersections are found by
// the parametric formula and signs use the standard convention on the
// polyline segment directions.
struct PolylineCrossings {
  long signed_sum = 0;
  long count = 0;
};

inline PolylineCrossings brute_force_crossings(const std::vector<Vec3>& a,
                                               const std::vector<Vec3>& b,
                                               const Vec3& direction, bool same) {
  Vec3 u, v;
  orthonormal_basis(direction.normalized(), u, v);
  auto px = [&](const Vec3& p) { return dot(p, u); };
  auto py = [&](const Vec3& p) { return dot(p, v); };
  auto ph = [&](const Vec3& p) { return dot(p, direction.normalized()); };

  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  PolylineCrossings out;
  for (int i = 0; i < na; ++i) {
    const int j_begin = same ? i + 2 : 0;
    for (int j = j_begin; j < nb; ++j) {
      if (same && i == 0 && j == na - 1) continue;
      const Vec3 &A1 = a[i], &A2 = a[(i + 1) % na];
      const Vec3 &B1 = b[j], &B2 = b[(j + 1) % nb];
      const double rx = px(A2) - px(A1), ry = py(A2) - py(A1);
      const double sx = px(B2) - px(B1), sy = py(B2) - py(B1);
      const double denom = rx * sy - ry * sx;
      if (denom == 0.0) continue;
      const double qx = px(B1) - px(A1), qy = py(B1) - py(A1);
      const double alpha = (qx * sy - qy * sx) / denom;
      const double beta = (qx * ry - qy * rx) / denom;
      if (alpha <= 0.0 || alpha >= 1.0 || beta <= 0.0 || beta >= 1.0) continue;
      const double ha = ph(A1) + alpha * (ph(A2) - ph(A1));
      const double hb = ph(B1) + beta * (ph(B2) - ph(B1));
      double ox, oy, ux_, uy_;
      if (ha > hb) {
        ox = rx; oy = ry; ux_ = sx; uy_ = sy;
      } else {
        ox = sx; oy = sy; ux_ = rx; uy_ = ry;
      }
      const double det = ox * uy_ - oy * ux_;
      out.signed_sum += det > 0 ? 1 : -1;
      out.count += 1;
    }
  }
  return out;
}

inline std::vector<Vec3> sample_points(const Curve& c, int n) {
  std::vector<Vec3> p(n);
  for (int i = 0; i < n; ++i) p[i] = c.eval(static_cast<double>(i) / n);
  return p;
}

// Closed stadium curve (two semicircular caps joined by straight edges),
// sampled uniformly by arclength; the straight runs make the sampled
// spline's curvature vanish.
inline std::vector<Vec3> stadium_samples(int n) {
  const double pi = std::numbers::pi;
  const double total = 2.0 * pi + 4.0;
  std::vector<Vec3> pts(n);
  for (int i = 0; i < n; ++i) {
    const double s = total * i / n;
    if (s < pi) {
      const double a = -pi / 2 + s;
      pts[i] = {1.0 + std::cos(a), std::sin(a), 0.0};
    } else if (s < pi + 2.0) {
      pts[i] = {1.0 - (s - pi), 1.0, 0.0};
    } else if (s < 2.0 * pi + 2.0) {
      const double a = pi / 2 + (s - pi - 2.0);
      pts[i] = {-1.0 + std::cos(a), std::sin(a), 0.0};
    } else {
      pts[i] = {-1.0 + (s - 2.0 * pi - 2.0), -1.0, 0.0};
    }
  }
  return pts;
}

}  // namespace selflink::testing
