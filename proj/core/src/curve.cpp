#include "selflink/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "selflink/errors.hpp"

namespace selflink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Derivatives of rho(t) * cos(a t) / rho(t) * sin(a t) for the torus knot
// and perturbed circle families. rho[k] holds the k-th derivative of rho.
struct TrigProduct {
  static double c0(const double* rho, double a, double t) { return rho[0] * std::cos(a * t); }
  static double c1(const double* rho, double a, double t) {
    const double C = std::cos(a * t), S = std::sin(a * t);
    return rho[1] * C - a * rho[0] * S;
  }
  static double c2(const double* rho, double a, double t) {
    const double C = std::cos(a * t), S = std::sin(a * t);
    return rho[2] * C - 2.0 * a * rho[1] * S - a * a * rho[0] * C;
  }
  static double c3(const double* rho, double a, double t) {
    const double C = std::cos(a * t), S = std::sin(a * t);
    return rho[3] * C - 3.0 * a * rho[2] * S - 3.0 * a * a * rho[1] * C + a * a * a * rho[0] * S;
  }
  static double s0(const double* rho, double a, double t) { return rho[0] * std::sin(a * t); }
  static double s1(const double* rho, double a, double t) {
    const double C = std::cos(a * t), S = std::sin(a * t);
    return rho[1] * S + a * rho[0] * C;
  }
  static double s2(const double* rho, double a, double t) {
    const double C = std::cos(a * t), S = std::sin(a * t);
    return rho[2] * S + 2.0 * a * rho[1] * C - a * a * rho[0] * S;
  }
  static double s3(const double* rho, double a, double t) {
    const double C = std::cos(a * t), S = std::sin(a * t);
    return rho[3] * S + 3.0 * a * rho[2] * C - 3.0 * a * a * rho[1] * S - a * a * a * rho[0] * C;
  }
};

Vec3 tube_point(const double* rho, double a, double b, double r, double t, int order) {
  // x = rho cos(at), y = rho sin(at), z = r sin(bt)
  switch (order) {
    case 0:
      return {TrigProduct::c0(rho, a, t), TrigProduct::s0(rho, a, t), r * std::sin(b * t)};
    case 1:
      return {TrigProduct::c1(rho, a, t), TrigProduct::s1(rho, a, t), r * b * std::cos(b * t)};
    case 2:
      return {TrigProduct::c2(rho, a, t), TrigProduct::s2(rho, a, t),
              -r * b * b * std::sin(b * t)};
    case 3:
      return {TrigProduct::c3(rho, a, t), TrigProduct::s3(rho, a, t),
              -r * b * b * b * std::cos(b * t)};
    default:
      throw Error("derivative order must be 1, 2 or 3");
  }
}

}  // namespace

double Curve::wrap(double t) {
  double w = t - std::floor(t);
  if (w >= 1.0) w = 0.0;
  return w;
}

Vec3 Curve::derivative(double t, int order) const {
  if (order < 1 || order > 3) throw Error("derivative order must be 1, 2 or 3");
  return derivative_local(wrap(t), order);
}

Vec3 Curve::unit_tangent(double t) const {
  const Vec3 d = derivative(t, 1);
  const double n = d.norm();
  if (n <= 1e-9) throw Error("curve speed vanishes at t=" + std::to_string(t));
  return d / n;
}

double Curve::curvature(double t) const {
  const Vec3 d1 = derivative(t, 1);
  const double n = d1.norm();
  if (n <= 1e-9) throw Error("curve speed vanishes at t=" + std::to_string(t));
  const Vec3 d2 = derivative(t, 2);
  return cross(d1, d2).norm() / (n * n * n);
}

double Curve::torsion(double t) const {
  const Vec3 d1 = derivative(t, 1);
  if (d1.norm() <= 1e-9) throw Error("curve speed vanishes at t=" + std::to_string(t));
  const Vec3 d2 = derivative(t, 2);
  const Vec3 cr = cross(d1, d2);
  const double cn = cr.norm();
  if (cn < 1e-9) throw TorsionUndefined(t);
  return dot(cr, derivative(t, 3)) / (cn * cn);
}

FrameTriple Curve::frenet_frame(double t) const {
  const Vec3 d1 = derivative(t, 1);
  const double n = d1.norm();
  if (n <= 1e-9) throw Error("curve speed vanishes at t=" + std::to_string(t));
  const Vec3 d2 = derivative(t, 2);
  const double kappa = cross(d1, d2).norm() / (n * n * n);
  if (kappa <= 1e-9) throw FrameUndefined(t);
  const Vec3 e1 = d1 / n;
  const Vec3 w = d2 - e1 * dot(d2, e1);
  const Vec3 e2 = w.normalized();
  return {e1, e2, cross(e1, e2)};
}

double Curve::arclength(int n_samples) const {
  if (n_samples < 16) throw Error("arclength needs at least 16 samples");
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) sum += speed(static_cast<double>(i) / n_samples);
  return sum / n_samples;
}

double Curve::diameter(int n_samples) const {
  std::vector<Vec3> p(n_samples);
  for (int i = 0; i < n_samples; ++i) p[i] = eval(static_cast<double>(i) / n_samples);
  double best = 0.0;
  for (int i = 0; i < n_samples; ++i)
    for (int j = i + 1; j < n_samples; ++j)
      best = std::max(best, (p[i] - p[j]).norm_squared());
  return std::sqrt(best);
}

// --- CircleCurve ---

CircleCurve::CircleCurve(double radius, const Vec3& center, const Vec3& normal)
    : radius_(radius), center_(center) {
  if (!(radius > 0.0)) throw Error("circle radius must be positive");
  const double nn = normal.norm();
  if (nn <= 0.0) throw Error("circle normal must be nonzero");
  orthonormal_basis(normal / nn, u_, v_);
}

Vec3 CircleCurve::eval_local(double t) const {
  const double a = kTwoPi * t;
  return center_ + radius_ * (std::cos(a) * u_ + std::sin(a) * v_);
}

Vec3 CircleCurve::derivative_local(double t, int order) const {
  const double a = kTwoPi * t;
  const double f = radius_ * std::pow(kTwoPi, order);
  switch (order) {
    case 1:
      return f * (-std::sin(a) * u_ + std::cos(a) * v_);
    case 2:
      return f * (-std::cos(a) * u_ - std::sin(a) * v_);
    default:
      return f * (std::sin(a) * u_ - std::cos(a) * v_);
  }
}

// --- TorusKnotCurve ---

TorusKnotCurve::TorusKnotCurve(int p, int q, double big_radius, double small_radius)
    : p_(p), q_(q), R_(big_radius), r_(small_radius) {
  if (p < 1 || q < 1) throw Error("torus knot p, q must be positive integers");
  if (std::gcd(p, q) != 1) throw Error("torus knot requires gcd(p, q) = 1");
  if (!(small_radius > 0.0 && small_radius < big_radius))
    throw Error("torus knot requires 0 < r < R");
}

Vec3 TorusKnotCurve::eval_local(double t) const {
  const double b = kTwoPi * q_;
  const double rho[4] = {R_ + r_ * std::cos(b * t), 0, 0, 0};
  return tube_point(rho, kTwoPi * p_, b, r_, t, 0);
}

Vec3 TorusKnotCurve::derivative_local(double t, int order) const {
  const double b = kTwoPi * q_;
  const double C = std::cos(b * t), S = std::sin(b * t);
  const double rho[4] = {R_ + r_ * C, -r_ * b * S, -r_ * b * b * C, r_ * b * b * b * S};
  return tube_point(rho, kTwoPi * p_, b, r_, t, order);
}

// --- PerturbedCircleCurve ---

PerturbedCircleCurve::PerturbedCircleCurve(double radius, double amplitude, int mode,
                                           double axial_amplitude, int axial_mode)
    : radius_(radius),
      amplitude_(amplitude),
      mode_(mode),
      axial_amplitude_(axial_amplitude),
      axial_mode_(axial_mode == 0 ? mode : axial_mode) {
  if (!(radius > 0.0)) throw Error("perturbed circle radius must be positive");
  if (mode < 1) throw Error("perturbed circle mode must be a positive integer");
  if (std::abs(amplitude) >= radius)
    throw Error("perturbed circle amplitude must be smaller than the radius");
}

Vec3 PerturbedCircleCurve::eval_local(double t) const {
  const double b = kTwoPi * mode_;
  const double rho[4] = {radius_ + amplitude_ * std::cos(b * t), 0, 0, 0};
  Vec3 p = tube_point(rho, kTwoPi, b, 0.0, t, 0);
  p.z = axial_amplitude_ * std::sin(kTwoPi * axial_mode_ * t);
  return p;
}

Vec3 PerturbedCircleCurve::derivative_local(double t, int order) const {
  const double b = kTwoPi * mode_;
  const double C = std::cos(b * t), S = std::sin(b * t);
  const double rho[4] = {radius_ + amplitude_ * C, -amplitude_ * b * S,
                         -amplitude_ * b * b * C, amplitude_ * b * b * b * S};
  Vec3 d = tube_point(rho, kTwoPi, b, 0.0, t, order);
  const double bz = kTwoPi * axial_mode_;
  const double az = axial_amplitude_;
  switch (order) {
    case 1: d.z = az * bz * std::cos(bz * t); break;
    case 2: d.z = -az * bz * bz * std::sin(bz * t); break;
    default: d.z = -az * bz * bz * bz * std::cos(bz * t); break;
  }
  return d;
}

// --- SampledCurve ---

SampledCurve::SampledCurve(std::vector<Vec3> samples, bool validate_embedding)
    : samples_(std::move(samples)), spline_(samples_) {
  const int n = static_cast<int>(samples_.size());
  if (n < 8) throw Error("sampled curve needs at least 8 samples");
  if (validate_embedding) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent across the wrap
        if ((samples_[i] - samples_[j]).norm_squared() <= 0.0)
          throw Error("sampled curve is not embedded: samples " + std::to_string(i) +
                      " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

Vec3 SampledCurve::eval_local(double t) const { return spline_.eval(t); }

Vec3 SampledCurve::derivative_local(double t, int order) const {
  return spline_.derivative(t, order);
}

// --- adaptors ---

DisplacedCurve::DisplacedCurve(CurvePtr base, const Vec3& axis, double amplitude,
                               int mode, double phase)
    : base_(std::move(base)), axis_(axis), amplitude_(amplitude), mode_(mode), phase_(phase) {
  if (!base_) throw Error("displaced curve needs a base curve");
  if (mode_ < 1) throw Error("displacement mode must be a positive integer");
}

Vec3 DisplacedCurve::eval_local(double t) const {
  const double a = kTwoPi * mode_ * t + phase_;
  return base_->eval(t) + amplitude_ * std::sin(a) * axis_;
}

Vec3 DisplacedCurve::derivative_local(double t, int order) const {
  const double w = kTwoPi * mode_;
  const double a = w * t + phase_;
  double f;
  switch (order) {
    case 1: f = w * std::cos(a); break;
    case 2: f = -w * w * std::sin(a); break;
    default: f = -w * w * w * std::cos(a); break;
  }
  return base_->derivative(t, order) + amplitude_ * f * axis_;
}

Vec3 MirrorCurve::eval_local(double t) const {
  Vec3 p = base_->eval(t);
  p.z = -p.z;
  return p;
}

Vec3 MirrorCurve::derivative_local(double t, int order) const {
  Vec3 d = base_->derivative(t, order);
  d.z = -d.z;
  return d;
}

Vec3 ReversedCurve::eval_local(double t) const { return base_->eval(-t); }

Vec3 ReversedCurve::derivative_local(double t, int order) const {
  const Vec3 d = base_->derivative(-t, order);
  return (order % 2 == 1) ? -d : d;
}

Vec3 ShiftedCurve::eval_local(double t) const { return base_->eval(t + shift_); }

Vec3 ShiftedCurve::derivative_local(double t, int order) const {
  return base_->derivative(t + shift_, order);
}

// --- CurveSpec ---

namespace {

class ParamReader {
 public:
  explicit ParamReader(const std::map<std::string, double>& params) : params_(params) {}

  double get(const std::string& key, double fallback) {
    seen_.push_back(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

  int get_int(const std::string& key, int fallback) {
    const double v = get(key, static_cast<double>(fallback));
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
      throw Error("curve parameter '" + key + "' must be an integer");
    return static_cast<int>(r);
  }

  void reject_unknown(const std::string& kind) const {
    for (const auto& [key, value] : params_) {
      (void)value;
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        throw Error("unknown parameter '" + key + "' for curve kind '" + kind + "'");
    }
  }

 private:
  const std::map<std::string, double>& params_;
  std::vector<std::string> seen_;
};

}  // namespace

CurvePtr make_curve(const CurveSpec& spec) {
  ParamReader p(spec.params);
  if (spec.kind != "sampled" && !spec.samples.empty())
    throw Error("curve kind '" + spec.kind + "' does not take samples");

  if (spec.kind == "circle") {
    const double radius = p.get("radius", 1.0);
    const Vec3 center{p.get("cx", 0.0), p.get("cy", 0.0), p.get("cz", 0.0)};
    const Vec3 normal{p.get("nx", 0.0), p.get("ny", 0.0), p.get("nz", 1.0)};
    p.reject_unknown(spec.kind);
    return std::make_shared<CircleCurve>(radius, center, normal);
  }
  if (spec.kind == "torus_knot") {
    const int kp = p.get_int("p", 2);
    const int kq = p.get_int("q", 3);
    const double R = p.get("R", 2.0);
    const double r = p.get("r", 0.5);
    p.reject_unknown(spec.kind);
    return std::make_shared<TorusKnotCurve>(kp, kq, R, r);
  }
  if (spec.kind == "perturbed_circle") {
    const double radius = p.get("radius", 1.0);
    const double amplitude = p.get("amplitude", 0.0);
    const int mode = p.get_int("mode", 2);
    const double axial_amplitude = p.get("axial_amplitude", 0.0);
    const int axial_mode = p.get_int("axial_mode", 0);
    p.reject_unknown(spec.kind);
    return std::make_shared<PerturbedCircleCurve>(radius, amplitude, mode,
                                                  axial_amplitude, axial_mode);
  }
  if (spec.kind == "sampled") {
    p.reject_unknown(spec.kind);
    if (spec.samples.empty()) throw Error("sampled curve needs samples");
    return std::make_shared<SampledCurve>(spec.samples);
  }
  throw Error("unknown curve kind '" + spec.kind + "'");
}

double min_nonadjacent_distance(const Curve& curve, int n_samples) {
  std::vector<Vec3> p(n_samples);
  for (int i = 0; i < n_samples; ++i) p[i] = curve.eval(static_cast<double>(i) / n_samples);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    for (int j = i + 2; j < n_samples; ++j) {
      if (i == 0 && j == n_samples - 1) continue;
      best = std::min(best, (p[i] - p[j]).norm_squared());
    }
  }
  return std::sqrt(best);
}

}  // namespace selflink
