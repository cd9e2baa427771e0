#pragma once

#include <vector>

#include "selflink/curve.hpp"
#include "selflink/vec3.hpp"

namespace selflink {

// One transversal double point of the projected diagram. Parameters are
// refined on the exact curves, so they are independent of the polyline
// resolution. `over` says which branch passes over (has the larger height
// along the projection direction): 0 for the s branch, 1 for the t one.
struct Crossing {
  int strand_a = 0;
  int strand_b = 0;
  double s = 0.0;  // parameter on strand_a
  double t = 0.0;  // parameter on strand_b
  int sign = 0;    // +1 or -1, right-handed convention
  int over = 0;
  double height_gap = 0.0;
};

struct DiagramVertex {
  double x = 0.0, y = 0.0;  // plane coordinates
  double h = 0.0;           // signed height along the projection direction
};

struct Diagram {
  Vec3 direction;  // the direction actually used (after genericity retries)
  std::vector<std::vector<DiagramVertex>> strands;
  std::vector<Crossing> crossings;
  std::vector<CurvePtr> curves;  // retained for sign recomputation
};

// Projects one curve (self-crossings) or two curves (inter-strand
// crossings only) along `direction` with n polyline points per strand.
// Non-generic pictures trigger a deterministic golden-angle retry
// schedule; NonGenericDirection is thrown after 32 attempts.
Diagram project_diagram(std::vector<CurvePtr> curves, const Vec3& direction, int n = 1024);

// Sign of det(projected over tangent, projected under tangent), computed
// from the exact curves. Throws DegenerateCrossing when the projected
// tangents are parallel to within 1e-9.
int crossing_sign(const Diagram& diagram, const Crossing& crossing);

// Sum of self-crossing signs; an integer invariant of the direction's
// generic chamber.
long diagram_writhe(const CurvePtr& curve, const Vec3& direction, int n = 1024);

// Half the signed inter-strand crossing sum; asserts the sum is even
// before halving (OddCrossingParity signals a detection bug).
long combinatorial_linking(const CurvePtr& c0, const CurvePtr& c1,
                           const Vec3& direction, int n = 1024);

struct CrossTangentZero {
  double s = 0.0, t = 0.0;
  int sign = 0;
};

struct CrossTangentResult {
  long count = 0;      // signed count of ordered cross-tangent events
  bool reliable = true;  // false when a zero's Jacobian was near singular
  std::vector<CrossTangentZero> zeros;
};

// Signed count of ordered pairs (s, t) where the forward tangent ray at
// gamma(s) meets gamma(t): zeros of the reduced Gauss map on the s-frame
// normal plane, located by a grid scan plus Newton refinement, each
// weighted by the sign of the Jacobian determinant.
CrossTangentResult cross_tangent_count(const Curve& curve, int n_grid);

}  // namespace selflink
