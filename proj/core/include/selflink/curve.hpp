#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "selflink/spline.hpp"
#include "selflink/vec3.hpp"

namespace selflink {

// Right-handed orthonormal triple: e3 = e1 x e2.
struct FrameTriple {
  Vec3 e1, e2, e3;
};

// Closed space curve parametrized over [0,1) with period 1. Positions and
// d/dt derivatives up to order 3; all parameters are wrapped into the
// period, so any finite t is valid. Instances are immutable and safe to
// share across threads.
class Curve {
 public:
  virtual ~Curve() = default;

  Vec3 eval(double t) const { return eval_local(wrap(t)); }
  Vec3 derivative(double t, int order) const;

  double speed(double t) const { return derivative(t, 1).norm(); }
  Vec3 unit_tangent(double t) const;

  // kappa = |g' x g''| / |g'|^3
  double curvature(double t) const;
  // tau = (g' x g'') . g''' / |g' x g''|^2, defined where curvature does
  // not vanish; throws TorsionUndefined when |g' x g''| < 1e-9.
  double torsion(double t) const;
  // (tangent, normal, binormal); throws FrameUndefined when kappa <= 1e-9.
  FrameTriple frenet_frame(double t) const;

  // Trapezoidal integral of |g'(t)| dt over one period, n_samples >= 16.
  double arclength(int n_samples) const;
  // Max pairwise distance over n uniform samples.
  double diameter(int n_samples = 256) const;

  static double wrap(double t);

 protected:
  virtual Vec3 eval_local(double t) const = 0;
  virtual Vec3 derivative_local(double t, int order) const = 0;
};

using CurvePtr = std::shared_ptr<const Curve>;

// gamma(t) = center + radius (cos(2 pi t) u + sin(2 pi t) v), with (u, v)
// the deterministic basis of the plane orthogonal to `normal` given by
// orthonormal_basis(). The default is the unit circle in the xy plane.
class CircleCurve final : public Curve {
 public:
  explicit CircleCurve(double radius = 1.0, const Vec3& center = {},
                       const Vec3& normal = {0, 0, 1});

  double radius() const { return radius_; }

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  double radius_;
  Vec3 center_, u_, v_;
};

// gamma(t) = ((R + r cos(2 pi q t)) cos(2 pi p t),
//             (R + r cos(2 pi q t)) sin(2 pi p t),
//             r sin(2 pi q t)),  gcd(p, q) = 1, 0 < r < R.
class TorusKnotCurve final : public Curve {
 public:
  TorusKnotCurve(int p, int q, double big_radius, double small_radius);

  int p() const { return p_; }
  int q() const { return q_; }

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  int p_, q_;
  double R_, r_;
};

// Planar circle with a radial cosine perturbation and an optional axial
// sine perturbation:
//   rho(t) = R + a cos(2 pi m t)
//   gamma(t) = (rho cos(2 pi t), rho sin(2 pi t), a_z sin(2 pi m_z t)).
// With a_z = 0 and a = R/(1+m^2) the curvature has m quadratic zeros,
// which makes the curve a deterministic fixture for the vanishing-
// curvature error paths.
class PerturbedCircleCurve final : public Curve {
 public:
  PerturbedCircleCurve(double radius, double amplitude, int mode,
                       double axial_amplitude = 0.0, int axial_mode = 0);

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  double radius_, amplitude_;
  int mode_;
  double axial_amplitude_;
  int axial_mode_;
};

// Periodic cubic spline through uniformly spaced samples. Third
// derivatives are piecewise constant (spline limit); torsion of sampled
// curves carries that reduced accuracy.
class SampledCurve final : public Curve {
 public:
  explicit SampledCurve(std::vector<Vec3> samples, bool validate_embedding = true);

  const std::vector<Vec3>& samples() const { return samples_; }

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  std::vector<Vec3> samples_;
  PeriodicSpline3 spline_;
};

// --- adaptors (exact, derivative-preserving) ---

// base(t) + u A sin(2 pi m t + phase) axis; the member curves of an
// isotopy family.
class DisplacedCurve final : public Curve {
 public:
  DisplacedCurve(CurvePtr base, const Vec3& axis, double amplitude, int mode,
                 double phase = 0.0);

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  CurvePtr base_;
  Vec3 axis_;
  double amplitude_;
  int mode_;
  double phase_;
};

// Mirror image through the xy plane (z negated).
class MirrorCurve final : public Curve {
 public:
  explicit MirrorCurve(CurvePtr base) : base_(std::move(base)) {}

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  CurvePtr base_;
};

// Orientation reversal, gamma(-t).
class ReversedCurve final : public Curve {
 public:
  explicit ReversedCurve(CurvePtr base) : base_(std::move(base)) {}

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  CurvePtr base_;
};

// Parameter shift, gamma(t + c).
class ShiftedCurve final : public Curve {
 public:
  ShiftedCurve(CurvePtr base, double shift) : base_(std::move(base)), shift_(shift) {}

 protected:
  Vec3 eval_local(double t) const override;
  Vec3 derivative_local(double t, int order) const override;

 private:
  CurvePtr base_;
  double shift_;
};

// --- serializable description ---

// JSON-facing description: {"kind": ..., "params": {...}, "samples": ...}.
struct CurveSpec {
  std::string kind;  // circle | torus_knot | perturbed_circle | sampled
  std::map<std::string, double> params;
  std::vector<Vec3> samples;  // sampled kind only
};

// Validates the description (known kind, known params, type invariants)
// and builds the curve.
CurvePtr make_curve(const CurveSpec& spec);

// Minimum distance between non-adjacent samples at the given resolution;
// the embedding check used by the quadrature preconditions.
double min_nonadjacent_distance(const Curve& curve, int n_samples);

}  // namespace selflink
