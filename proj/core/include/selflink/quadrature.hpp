#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "selflink/curve.hpp"
#include "selflink/vec3.hpp"

namespace selflink {

enum class DiagonalPolicy { zero };

struct QuadratureConfig {
  int n = 512;  // grid size per circle factor; >= 32 and even
  DiagonalPolicy diagonal_policy = DiagonalPolicy::zero;
  bool richardson = true;  // estimate error from |I_n - I_{n/2}|
  bool parallel = true;    // hint; rows split across threads for n >= 256
  int threads = 0;         // 0 = hardware concurrency; runtime knob, not serialized

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // Richardson difference, 0 when disabled
  int n_used = 0;
};

enum class DiagonalSide { plus, minus };

// Unit vector from c0(s) to c1(t); throws CoincidentPoints below 1e-12.
Vec3 gauss_map(const Curve& c0, const Curve& c1, double s, double t);

// Boundary value of the extended Gauss map on the two copies of the
// diagonal: +- the unit tangent.
Vec3 gauss_map_extended(const Curve& curve, double s, DiagonalSide side);

// (g0'(s) x g1'(t)) . (g0(s) - g1(t)) / |g0(s) - g1(t)|^3 -- the pullback
// of the sphere area form in coordinates, oriented so the linking number
// of a right-handed Hopf pair is +1. Exposed for the symmetry and oracle
// tests.
double linking_integrand(const Curve& c0, const Curve& c1, double s, double t);

// (1/4pi) sum over the n x n periodic grid. Requires the sampled curves
// to stay more than 1e-6 apart (CurvesIntersect otherwise).
IntegralResult linking_integral(const Curve& c0, const Curve& c1,
                                const QuadratureConfig& cfg);

// Writhe: the same sum with c0 = c1 and the diagonal entries set to zero
// (the integrand extends by 0 there). Requires the curve to be embedded
// at resolution n (SelfIntersection otherwise).
IntegralResult writhe_integral(const Curve& curve, const QuadratureConfig& cfg);

// Evaluates value_at_n over a strictly increasing list of even n.
std::vector<std::pair<int, double>> convergence_study(
    const std::function<double(int)>& value_at_n, const std::vector<int>& n_list);

}  // namespace selflink
