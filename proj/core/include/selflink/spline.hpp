#pragma once

#include <vector>

#include "selflink/vec3.hpp"

namespace selflink {

// Interpolating cubic spline through N values on the uniform periodic grid
// t_i = i/N, period 1. C2 everywhere; the third derivative is piecewise
// constant (one value per interval), which is the accuracy limit for
// torsion of sampled curves.
class PeriodicSpline {
 public:
  explicit PeriodicSpline(std::vector<double> values);

  double eval(double t) const;
  double derivative(double t, int order) const;  // order in {1,2,3}
  int size() const { return static_cast<int>(y_.size()); }

 private:
  int segment(double t, double& local) const;

  std::vector<double> y_;  // node values
  std::vector<double> m_;  // second derivatives (moments) at the nodes
  double h_ = 0.0;
};

// Three-component convenience wrapper.
class PeriodicSpline3 {
 public:
  explicit PeriodicSpline3(const std::vector<Vec3>& samples);

  Vec3 eval(double t) const;
  Vec3 derivative(double t, int order) const;
  int size() const { return x_.size(); }

 private:
  PeriodicSpline x_, y_, z_;
};

}  // namespace selflink
