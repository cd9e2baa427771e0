#pragma once

#include <cmath>

namespace selflink {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double a) const { return {x * a, y * a, z * a}; }
  constexpr Vec3 operator/(double a) const { return {x / a, y / a, z / a}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double a) { x *= a; y *= a; z *= a; return *this; }

  double norm_squared() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_squared()); }
  Vec3 normalized() const { return *this / norm(); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double a, const Vec3& v) { return v * a; }

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Scalar triple product det(a, b, c).
constexpr double triple(const Vec3& a, const Vec3& b, const Vec3& c) {
  return dot(cross(a, b), c);
}

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Deterministic right-handed orthonormal basis (u, v, axis) of the plane
// orthogonal to `axis` (which must be unit length). Seeds from the x axis
// unless that is too close to `axis`.
inline void orthonormal_basis(const Vec3& axis, Vec3& u, Vec3& v) {
  const Vec3 seed = std::abs(axis.x) <= 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  u = (seed - axis * dot(seed, axis)).normalized();
  v = cross(axis, u);
}

}  // namespace selflink
