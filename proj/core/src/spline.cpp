#include "selflink/spline.hpp"

#include <cmath>
#include <stdexcept>

#include "selflink/errors.hpp"

namespace selflink {

namespace {

// Solves the cyclic tridiagonal system with constant bands (1, 4, 1) and
// corner entries 1 via the Sherman-Morrison correction of two ordinary
// Thomas solves.
std::vector<double> solve_cyclic_144(const std::vector<double>& rhs) {
  const int n = static_cast<int>(rhs.size());
  std::vector<double> diag(n, 4.0);
  const double gamma = -4.0;
  diag[0] -= gamma;
  diag[n - 1] -= 1.0 / gamma;

  auto thomas = [n, &diag](const std::vector<double>& r) {
    std::vector<double> c(n), x(n);
    double beta = diag[0];
    x[0] = r[0] / beta;
    for (int i = 1; i < n; ++i) {
      c[i] = 1.0 / beta;
      beta = diag[i] - c[i];
      x[i] = (r[i] - x[i - 1]) / beta;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= c[i + 1] * x[i + 1];
    return x;
  };

  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = 1.0;

  const std::vector<double> y = thomas(rhs);
  const std::vector<double> q = thomas(u);
  const double num = y[0] + y[n - 1] / gamma;
  const double den = 1.0 + q[0] + q[n - 1] / gamma;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = y[i] - (num / den) * q[i];
  return x;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<double> values) : y_(std::move(values)) {
  const int n = static_cast<int>(y_.size());
  if (n < 3) throw Error("periodic spline needs at least 3 samples");
  h_ = 1.0 / n;

  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) {
    const double prev = y_[(i + n - 1) % n];
    const double next = y_[(i + 1) % n];
    rhs[i] = 6.0 * (next - 2.0 * y_[i] + prev) / (h_ * h_);
  }
  m_ = solve_cyclic_144(rhs);
}

int PeriodicSpline::segment(double t, double& local) const {
  const int n = size();
  double w = t - std::floor(t);
  if (w >= 1.0) w = 0.0;
  int idx = static_cast<int>(w * n);
  if (idx >= n) idx = n - 1;
  local = w - idx * h_;
  return idx;
}

double PeriodicSpline::eval(double t) const {
  double xi;
  const int i = segment(t, xi);
  const int n = size();
  const double yi = y_[i], yn = y_[(i + 1) % n];
  const double mi = m_[i], mn = m_[(i + 1) % n];
  const double b = (yn - yi) / h_ - h_ * (2.0 * mi + mn) / 6.0;
  const double c = mi / 2.0;
  const double d = (mn - mi) / (6.0 * h_);
  return yi + xi * (b + xi * (c + xi * d));
}

double PeriodicSpline::derivative(double t, int order) const {
  double xi;
  const int i = segment(t, xi);
  const int n = size();
  const double yi = y_[i], yn = y_[(i + 1) % n];
  const double mi = m_[i], mn = m_[(i + 1) % n];
  const double b = (yn - yi) / h_ - h_ * (2.0 * mi + mn) / 6.0;
  const double c = mi / 2.0;
  const double d = (mn - mi) / (6.0 * h_);
  switch (order) {
    case 1:
      return b + xi * (2.0 * c + 3.0 * xi * d);
    case 2:
      return 2.0 * c + 6.0 * d * xi;
    case 3:
      return 6.0 * d;
    default:
      throw Error("spline derivative order must be 1, 2 or 3");
  }
}

PeriodicSpline3::PeriodicSpline3(const std::vector<Vec3>& samples)
    : x_([&] {
        std::vector<double> c(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) c[i] = samples[i].x;
        return c;
      }()),
      y_([&] {
        std::vector<double> c(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) c[i] = samples[i].y;
        return c;
      }()),
      z_([&] {
        std::vector<double> c(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) c[i] = samples[i].z;
        return c;
      }()) {}

Vec3 PeriodicSpline3::eval(double t) const {
  return {x_.eval(t), y_.eval(t), z_.eval(t)};
}

Vec3 PeriodicSpline3::derivative(double t, int order) const {
  return {x_.derivative(t, order), y_.derivative(t, order), z_.derivative(t, order)};
}

}  // namespace selflink
