#pragma once

#include <memory>
#include <string>
#include <vector>

#include "selflink/curve.hpp"
#include "selflink/vec3.hpp"

namespace selflink {

// Smooth unit normal field n(t) along a closed curve. Evaluations are
// unit length and orthogonal to the tangent by construction; the field is
// an honest loop (no holonomy jump across t = 1).
class Framing {
 public:
  virtual ~Framing() = default;

  Vec3 normal(double t) const { return normal_local(Curve::wrap(t)); }
  Vec3 normal_derivative(double t) const { return normal_derivative_local(Curve::wrap(t)); }

  const CurvePtr& curve() const { return curve_; }
  virtual std::string kind_name() const = 0;

 protected:
  explicit Framing(CurvePtr curve) : curve_(std::move(curve)) {}
  virtual Vec3 normal_local(double t) const = 0;
  virtual Vec3 normal_derivative_local(double t) const = 0;

  CurvePtr curve_;
};

using FramingPtr = std::shared_ptr<const Framing>;

enum class LiftClass { trivial, nontrivial };

inline const char* to_string(LiftClass c) {
  return c == LiftClass::trivial ? "trivial" : "nontrivial";
}

// n(t) = Frenet normal e2(t). Scans 1024 points for curvature above 1e-6
// and throws CurvatureVanishes naming the first offending parameter.
FramingPtr frenet_framing(CurvePtr curve);

// n(t) = normalize(d - (d . t^) t^). Scans 1024 points for
// |d x t^| > 1e-6 and throws DirectionDegenerate on failure.
FramingPtr projection_framing(CurvePtr curve, const Vec3& direction);

// n_k(t) = cos(2 pi k t) n(t) + sin(2 pi k t) (t^ x n)(t). Twisting an
// already twisted framing merges the counts, so +k then -k is an exact
// round trip.
FramingPtr add_twists(FramingPtr framing, int k);

// Trigonometric interpolation through uniformly spaced unit normals; the
// derivative is the spectral derivative of the interpolant. Input samples
// must be unit length and orthogonal to the tangent to 1e-6.
FramingPtr sampled_framing(CurvePtr curve, std::vector<Vec3> normals);

// n(t) -> n(t + c) over the shifted base curve.
FramingPtr shifted_framing(FramingPtr framing, double shift);

// gamma_eps(t) = gamma(t) + eps n(t) as a sampled curve. Validates that
// the pushoff stays at distance > eps/2 from the base samples and throws
// PushoffCollision otherwise.
CurvePtr pushoff(const FramingPtr& framing, double epsilon, int resolution = 1024);

// tau_phi = (1/2pi) integral of det(t^, n, dn/dt) dt by the periodic
// trapezoid rule, n_samples >= 64. The triple product with the unit
// tangent is parametrization invariant, so no speed factor appears.
double twist_integral(const Framing& framing, int n_samples);

// (1/2pi) integral of tau(t) |gamma'(t)| dt; requires nowhere-vanishing
// curvature (same scan as frenet_framing).
double total_torsion(const Curve& curve, int n_samples);

// Homotopy class of the frame loop (t^, n, t^ x n) in pi_1(SO(3)),
// decided by sign-continuous transport of unit quaternions. Sampling is
// doubled (up to 16384) until consecutive frames differ by less than a
// quarter turn; throws LiftAmbiguous if that never happens or the
// endpoint match is unclear.
LiftClass so3_lift_class(const Framing& framing, int n_samples = 1024);

// Checks the three framing invariants (unit length, orthogonality,
// periodicity) on an n-point scan; throws Error on violation.
void validate_framing(const Framing& framing, int n_samples = 1024);

// Serializable description; `base` nests for the twisted kind.
struct FramingSpec {
  std::string kind;  // frenet | projection | twisted | sampled
  Vec3 direction{0, 0, 1};
  int twists = 0;
  std::shared_ptr<FramingSpec> base;
  std::vector<Vec3> samples;
};

FramingPtr make_framing(const FramingSpec& spec, CurvePtr curve);

}  // namespace selflink
