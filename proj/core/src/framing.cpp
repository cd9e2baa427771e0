#include "selflink/framing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "selflink/errors.hpp"

namespace selflink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct TangentData {
  Vec3 that;   // unit tangent
  Vec3 dthat;  // d/dt of the unit tangent
};

TangentData tangent_data(const Curve& c, double t) {
  const Vec3 u = c.derivative(t, 1);
  const double su = u.norm();
  if (su <= 1e-9) throw Error("curve speed vanishes at t=" + std::to_string(t));
  const Vec3 that = u / su;
  const Vec3 a = c.derivative(t, 2);
  return {that, (a - that * dot(a, that)) / su};
}

// d/dt of w/|w| given w and dw/dt.
Vec3 normalize_derivative(const Vec3& w, const Vec3& dw) {
  const double n = w.norm();
  return dw / n - w * (dot(w, dw) / (n * n * n));
}

class FrenetFraming final : public Framing {
 public:
  explicit FrenetFraming(CurvePtr curve) : Framing(std::move(curve)) {}
  std::string kind_name() const override { return "frenet"; }

 protected:
  Vec3 normal_local(double t) const override {
    const auto [that, dthat] = tangent_data(*curve_, t);
    (void)dthat;
    const Vec3 a = curve_->derivative(t, 2);
    const Vec3 w = a - that * dot(a, that);
    const double wn = w.norm();
    if (wn <= 1e-12 * std::max(1.0, a.norm())) throw FrameUndefined(t);
    return w / wn;
  }

  Vec3 normal_derivative_local(double t) const override {
    const auto [that, dthat] = tangent_data(*curve_, t);
    const Vec3 a = curve_->derivative(t, 2);
    const Vec3 j = curve_->derivative(t, 3);
    const Vec3 w = a - that * dot(a, that);
    const double wn = w.norm();
    if (wn <= 1e-12 * std::max(1.0, a.norm())) throw FrameUndefined(t);
    const Vec3 dw = j - that * (dot(j, that) + dot(a, dthat)) - dthat * dot(a, that);
    return normalize_derivative(w, dw);
  }
};

class ProjectionFraming final : public Framing {
 public:
  ProjectionFraming(CurvePtr curve, const Vec3& direction)
      : Framing(std::move(curve)), d_(direction) {}
  std::string kind_name() const override { return "projection"; }
  const Vec3& direction() const { return d_; }

 protected:
  Vec3 normal_local(double t) const override {
    const auto [that, dthat] = tangent_data(*curve_, t);
    (void)dthat;
    const Vec3 w = d_ - that * dot(d_, that);
    const double wn = w.norm();
    if (wn <= 1e-9) throw DirectionDegenerate(t);
    return w / wn;
  }

  Vec3 normal_derivative_local(double t) const override {
    const auto [that, dthat] = tangent_data(*curve_, t);
    const Vec3 w = d_ - that * dot(d_, that);
    if (w.norm() <= 1e-9) throw DirectionDegenerate(t);
    const Vec3 dw = -(that * dot(d_, dthat) + dthat * dot(d_, that));
    return normalize_derivative(w, dw);
  }

 private:
  Vec3 d_;
};

class TwistedFraming final : public Framing {
 public:
  TwistedFraming(FramingPtr base, int k)
      : Framing(base->curve()), base_(std::move(base)), k_(k) {}
  std::string kind_name() const override { return "twisted"; }
  const FramingPtr& base() const { return base_; }
  int twists() const { return k_; }

 protected:
  Vec3 normal_local(double t) const override {
    const double a = kTwoPi * k_ * t;
    const Vec3 nb = base_->normal(t);
    const Vec3 that = curve_->unit_tangent(t);
    return std::cos(a) * nb + std::sin(a) * cross(that, nb);
  }

  Vec3 normal_derivative_local(double t) const override {
    const double w = kTwoPi * k_;
    const double a = w * t;
    const double C = std::cos(a), S = std::sin(a);
    const Vec3 nb = base_->normal(t);
    const Vec3 dnb = base_->normal_derivative(t);
    const auto [that, dthat] = tangent_data(*curve_, t);
    const Vec3 bn = cross(that, nb);
    const Vec3 dbn = cross(dthat, nb) + cross(that, dnb);
    return -w * S * nb + C * dnb + w * C * bn + S * dbn;
  }

 private:
  FramingPtr base_;
  int k_;
};

// Trigonometric interpolant of the raw samples; evaluation projects out
// the tangential component and renormalizes, so the framing invariants
// hold exactly between nodes. The derivative follows by the chain rule
// from the interpolant's spectral derivative.
class SampledFraming final : public Framing {
 public:
  SampledFraming(CurvePtr curve, std::vector<Vec3> normals)
      : Framing(std::move(curve)) {
    const int n = static_cast<int>(normals.size());
    if (n < 8) throw Error("sampled framing needs at least 8 normals");
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      if (std::abs(normals[i].norm() - 1.0) > 1e-6)
        throw Error("sampled framing normal " + std::to_string(i) + " is not unit length");
      if (std::abs(dot(normals[i], curve_->unit_tangent(t))) > 1e-3)
        throw Error("sampled framing normal " + std::to_string(i) +
                    " is not orthogonal to the tangent");
    }
    build_coefficients(normals);
  }

  std::string kind_name() const override { return "sampled"; }

 protected:
  Vec3 normal_local(double t) const override {
    Vec3 p, dp;
    interpolant(t, p, dp);
    const auto [that, dthat] = tangent_data(*curve_, t);
    (void)dthat;
    const Vec3 w = p - that * dot(p, that);
    const double wn = w.norm();
    if (wn <= 1e-6) throw Error("sampled framing degenerates at t=" + std::to_string(t));
    return w / wn;
  }

  Vec3 normal_derivative_local(double t) const override {
    Vec3 p, dp;
    interpolant(t, p, dp);
    const auto [that, dthat] = tangent_data(*curve_, t);
    const Vec3 w = p - that * dot(p, that);
    if (w.norm() <= 1e-6) throw Error("sampled framing degenerates at t=" + std::to_string(t));
    const Vec3 dw = dp - that * (dot(dp, that) + dot(p, dthat)) - dthat * dot(p, that);
    return normalize_derivative(w, dw);
  }

 private:
  void build_coefficients(const std::vector<Vec3>& f) {
    n_ = static_cast<int>(f.size());
    const int half = n_ / 2;
    cos_.assign(half + 1, Vec3{});
    sin_.assign(half + 1, Vec3{});
    for (int k = 0; k <= half; ++k) {
      Vec3 a{}, b{};
      for (int j = 0; j < n_; ++j) {
        const double ang = kTwoPi * k * j / n_;
        a += f[j] * std::cos(ang);
        b += f[j] * std::sin(ang);
      }
      cos_[k] = a * (2.0 / n_);
      sin_[k] = b * (2.0 / n_);
    }
  }

  void interpolant(double t, Vec3& p, Vec3& dp) const {
    const int half = n_ / 2;
    const bool even = (n_ % 2 == 0);
    p = cos_[0] * 0.5;
    dp = Vec3{};
    const int kmax = even ? half - 1 : half;
    for (int k = 1; k <= kmax; ++k) {
      const double ang = kTwoPi * k * t;
      const double C = std::cos(ang), S = std::sin(ang);
      p += cos_[k] * C + sin_[k] * S;
      dp += (sin_[k] * C - cos_[k] * S) * (kTwoPi * k);
    }
    if (even) {
      const double ang = kTwoPi * half * t;
      p += cos_[half] * (0.5 * std::cos(ang));
      dp -= cos_[half] * (0.5 * kTwoPi * half * std::sin(ang));
    }
  }

  int n_ = 0;
  std::vector<Vec3> cos_, sin_;
};

class ShiftedFraming final : public Framing {
 public:
  ShiftedFraming(FramingPtr base, double shift)
      : Framing(std::make_shared<ShiftedCurve>(base->curve(), shift)),
        base_(std::move(base)),
        shift_(shift) {}
  std::string kind_name() const override { return base_->kind_name(); }

 protected:
  Vec3 normal_local(double t) const override { return base_->normal(t + shift_); }
  Vec3 normal_derivative_local(double t) const override {
    return base_->normal_derivative(t + shift_);
  }

 private:
  FramingPtr base_;
  double shift_;
};

}  // namespace

FramingPtr frenet_framing(CurvePtr curve) {
  constexpr int kScan = 1024;
  for (int i = 0; i < kScan; ++i) {
    const double t = static_cast<double>(i) / kScan;
    const Vec3 d1 = curve->derivative(t, 1);
    const double su = d1.norm();
    if (su <= 1e-9) throw CurvatureVanishes(t);
    const double kappa = cross(d1, curve->derivative(t, 2)).norm() / (su * su * su);
    if (kappa <= 1e-6) throw CurvatureVanishes(t);
  }
  return std::make_shared<FrenetFraming>(std::move(curve));
}

FramingPtr projection_framing(CurvePtr curve, const Vec3& direction) {
  const double dn = direction.norm();
  if (dn <= 0.0) throw Error("projection direction must be nonzero");
  const Vec3 d = direction / dn;
  constexpr int kScan = 1024;
  for (int i = 0; i < kScan; ++i) {
    const double t = static_cast<double>(i) / kScan;
    if (cross(d, curve->unit_tangent(t)).norm() <= 1e-6) throw DirectionDegenerate(t);
  }
  return std::make_shared<ProjectionFraming>(std::move(curve), d);
}

FramingPtr add_twists(FramingPtr framing, int k) {
  if (k == 0) return framing;
  if (auto tw = std::dynamic_pointer_cast<const TwistedFraming>(framing)) {
    const int merged = tw->twists() + k;
    return merged == 0 ? tw->base()
                       : std::make_shared<TwistedFraming>(tw->base(), merged);
  }
  return std::make_shared<TwistedFraming>(std::move(framing), k);
}

FramingPtr sampled_framing(CurvePtr curve, std::vector<Vec3> normals) {
  return std::make_shared<SampledFraming>(std::move(curve), std::move(normals));
}

FramingPtr shifted_framing(FramingPtr framing, double shift) {
  return std::make_shared<ShiftedFraming>(std::move(framing), shift);
}

CurvePtr pushoff(const FramingPtr& framing, double epsilon, int resolution) {
  if (!(epsilon > 0.0)) throw Error("pushoff epsilon must be positive");
  if (resolution < 16) throw Error("pushoff resolution must be at least 16");
  const Curve& c = *framing->curve();

  std::vector<Vec3> base(resolution), pushed(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double t = static_cast<double>(i) / resolution;
    base[i] = c.eval(t);
    pushed[i] = base[i] + epsilon * framing->normal(t);
  }

  double min_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j)
      min_d2 = std::min(min_d2, (base[i] - pushed[j]).norm_squared());
  const double min_d = std::sqrt(min_d2);
  if (!(min_d > epsilon / 2.0)) throw PushoffCollision(epsilon, min_d);

  return std::make_shared<SampledCurve>(std::move(pushed), /*validate_embedding=*/false);
}

double twist_integral(const Framing& framing, int n_samples) {
  if (n_samples < 64) throw Error("twist integral needs at least 64 samples");
  const Curve& c = *framing.curve();
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) / n_samples;
    sum += triple(c.unit_tangent(t), framing.normal(t), framing.normal_derivative(t));
  }
  return sum / (kTwoPi * n_samples);
}

double total_torsion(const Curve& curve, int n_samples) {
  if (n_samples < 64) throw Error("total torsion needs at least 64 samples");
  constexpr int kScan = 1024;
  for (int i = 0; i < kScan; ++i) {
    const double t = static_cast<double>(i) / kScan;
    const Vec3 d1 = curve.derivative(t, 1);
    const double su = d1.norm();
    if (su <= 1e-9) throw CurvatureVanishes(t);
    if (cross(d1, curve.derivative(t, 2)).norm() / (su * su * su) <= 1e-6)
      throw CurvatureVanishes(t);
  }
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double t = static_cast<double>(i) / n_samples;
    sum += curve.torsion(t) * curve.speed(t);
  }
  return sum / (kTwoPi * n_samples);
}

namespace {

using Quat = std::array<double, 4>;  // (w, x, y, z)

double qdot(const Quat& a, const Quat& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// Shepperd's method on the frame matrix with columns (e1, e2, e3).
Quat frame_quaternion(const Vec3& e1, const Vec3& e2, const Vec3& e3) {
  const double m00 = e1.x, m01 = e2.x, m02 = e3.x;
  const double m10 = e1.y, m11 = e2.y, m12 = e3.y;
  const double m20 = e1.z, m21 = e2.z, m22 = e3.z;
  const double tr = m00 + m11 + m22;
  Quat q;
  if (tr > 0.0) {
    double s = std::sqrt(tr + 1.0) * 2.0;
    q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
  } else if (m00 > m11 && m00 > m22) {
    double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
    q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
  } else if (m11 > m22) {
    double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
    q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
  } else {
    double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
    q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
  }
  const double n = std::sqrt(qdot(q, q));
  for (double& c : q) c /= n;
  return q;
}

}  // namespace

LiftClass so3_lift_class(const Framing& framing, int n_samples) {
  const Curve& c = *framing.curve();
  const double kMinStep = std::cos(std::numbers::pi / 4.0);  // quarter-turn guard

  auto frame_at = [&](double t) {
    const Vec3 e1 = c.unit_tangent(t);
    const Vec3 e2 = framing.normal(t);
    return frame_quaternion(e1, e2, cross(e1, e2));
  };

  for (int n = std::max(n_samples, 4); n <= 16384; n *= 2) {
    const Quat q0 = frame_at(0.0);
    Quat prev = q0;
    bool ok = true;
    Quat last = q0;
    for (int i = 1; i <= n; ++i) {
      const double t = (i == n) ? 0.0 : static_cast<double>(i) / n;
      Quat q = frame_at(t);
      double d = qdot(prev, q);
      if (d < 0.0) {
        for (double& comp : q) comp = -comp;
        d = -d;
      }
      if (d < kMinStep) {
        ok = false;
        break;
      }
      prev = q;
      if (i == n) last = q;
    }
    if (!ok) continue;

    auto dist = [&](double sign) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double diff = last[k] - sign * q0[k];
        s += diff * diff;
      }
      return std::sqrt(s);
    };
    if (dist(+1.0) < 0.5) return LiftClass::trivial;
    if (dist(-1.0) < 0.5) return LiftClass::nontrivial;
  }
  throw LiftAmbiguous("frame loop too ragged to classify even at 16384 samples");
}

void validate_framing(const Framing& framing, int n_samples) {
  const Curve& c = *framing.curve();
  for (int i = 0; i <= n_samples; ++i) {
    const double t = (i == n_samples) ? 1.0 - 1e-9 : static_cast<double>(i) / n_samples;
    const Vec3 n = framing.normal(t);
    if (std::abs(n.norm() - 1.0) > 1e-10)
      throw Error("framing normal is not unit length at t=" + std::to_string(t));
    if (std::abs(dot(n, c.unit_tangent(t))) > 1e-9)
      throw Error("framing normal is not orthogonal at t=" + std::to_string(t));
  }
  // lim n(t -> 1) by linear extrapolation from just inside the period;
  // the O(delta^2 |n''|) extrapolation error stays well under the 1e-9
  // periodicity tolerance even for framings twisted by tens of turns.
  const double delta = 1e-7;
  const Vec3 limit = 2.0 * framing.normal(1.0 - delta) - framing.normal(1.0 - 2.0 * delta);
  if ((framing.normal(0.0) - limit).norm() > 1e-9)
    throw Error("framing is not periodic");
}

FramingPtr make_framing(const FramingSpec& spec, CurvePtr curve) {
  if (spec.kind == "frenet") return frenet_framing(std::move(curve));
  if (spec.kind == "projection") return projection_framing(std::move(curve), spec.direction);
  if (spec.kind == "twisted") {
    if (!spec.base) throw Error("twisted framing needs a base framing");
    return add_twists(make_framing(*spec.base, std::move(curve)), spec.twists);
  }
  if (spec.kind == "sampled") {
    if (spec.samples.empty()) throw Error("sampled framing needs samples");
    return sampled_framing(std::move(curve), spec.samples);
  }
  throw Error("unknown framing kind '" + spec.kind + "'");
}

}  // namespace selflink
