#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "selflink/curve.hpp"
#include "selflink/errors.hpp"

using namespace selflink;
using selflink::testing::fd4_curvature;
using selflink::testing::fd4_torsion;
using selflink::testing::fd_of_order;
using selflink::testing::stadium_samples;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

CurvePtr trefoil() { return std::make_shared<TorusKnotCurve>(2, 3, 2.0, 0.5); }
}  // namespace

TEST_CASE("circle evaluation") {
  CircleCurve c(1.0);
  CHECK((c.eval(0.0) - Vec3{1, 0, 0}).norm() < 1e-15);
  CHECK((c.eval(0.25) - Vec3{0, 1, 0}).norm() < 1e-15);
  CHECK((c.eval(0.5) - Vec3{-1, 0, 0}).norm() < 1e-15);
}

TEST_CASE("torus knot evaluation at t=0") {
  TorusKnotCurve k(2, 3, 2.0, 0.5);
  CHECK((k.eval(0.0) - Vec3{2.5, 0, 0}).norm() < 1e-15);
}

TEST_CASE("circle derivatives are exact") {
  CircleCurve c(1.0);
  CHECK((c.derivative(0.0, 1) - Vec3{0, kTwoPi, 0}).norm() < 1e-12);
  CHECK((c.derivative(0.0, 2) - Vec3{-kTwoPi * kTwoPi, 0, 0}).norm() < 1e-12);
}

TEST_CASE("derivative order must be 1..3") {
  CircleCurve c(1.0);
  CHECK_THROWS_AS(c.derivative(0.1, 0), Error);
  CHECK_THROWS_AS(c.derivative(0.1, 4), Error);
}

TEST_CASE("derivatives match central finite differences on all built-in kinds") {
  const std::vector<CurvePtr> curves = {
      std::make_shared<CircleCurve>(1.0),
      std::make_shared<CircleCurve>(2.5, Vec3{1, -2, 0.5}, Vec3{1, 1, 1}),
      trefoil(),
      std::make_shared<TorusKnotCurve>(3, 2, 2.0, 0.5),
      std::make_shared<PerturbedCircleCurve>(1.0, 0.05, 4, 0.08, 3),
  };
  std::mt19937 rng(20240901);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (const auto& c : curves) {
    for (int k = 0; k < 100; ++k) {
      const double t = uniform(rng);
      for (int order = 1; order <= 3; ++order) {
        const Vec3 exact = c->derivative(t, order);
        const Vec3 fd = fd_of_order(*c, t, order);
        CHECK((exact - fd).norm() <= 1e-6 * exact.norm());
      }
    }
  }
}

TEST_CASE("torus knot first derivative matches the fd oracle example") {
  auto k = trefoil();
  const Vec3 exact = k->derivative(0.1, 1);
  const Vec3 fd = selflink::testing::fd_first_derivative(*k, 0.1);
  CHECK((exact - fd).norm() <= 1e-6 * exact.norm());
}

TEST_CASE("curvature and torsion of circles") {
  CircleCurve unit(1.0);
  CircleCurve two(2.0);
  for (double t : {0.0, 0.3, 0.77}) {
    CHECK(unit.curvature(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.curvature(t) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(unit.torsion(t)) < 1e-12);
  }
}

TEST_CASE("curvature and torsion match the 4th-order fd oracle") {
  auto k = trefoil();
  for (double t : {0.2, 0.05, 0.41, 0.9}) {
    CHECK(k->curvature(t) ==
          doctest::Approx(fd4_curvature(*k, t)).epsilon(1e-6));
    CHECK(k->torsion(t) == doctest::Approx(fd4_torsion(*k, t)).epsilon(1e-6));
  }
}

TEST_CASE("torsion undefined where curvature vanishes") {
  // amplitude R/(1+m^2) puts quadratic curvature zeros at t=(2j+1)/(2m)
  PerturbedCircleCurve dip(1.0, 0.1, 3);
  CHECK_THROWS_AS(dip.torsion(1.0 / 6.0), TorsionUndefined);
  CHECK_NOTHROW(dip.torsion(0.01));
}

TEST_CASE("frenet frame of the circle") {
  CircleCurve c(1.0);
  const FrameTriple f0 = c.frenet_frame(0.0);
  CHECK((f0.e1 - Vec3{0, 1, 0}).norm() < 1e-12);
  CHECK((f0.e2 - Vec3{-1, 0, 0}).norm() < 1e-12);
  CHECK((f0.e3 - Vec3{0, 0, 1}).norm() < 1e-12);
  const FrameTriple fh = c.frenet_frame(0.5);
  CHECK((fh.e1 - Vec3{0, -1, 0}).norm() < 1e-12);
  CHECK((fh.e2 - Vec3{1, 0, 0}).norm() < 1e-12);
  CHECK((fh.e3 - Vec3{0, 0, 1}).norm() < 1e-12);
}

TEST_CASE("frenet frame satisfies the triple invariants where curvature is positive") {
  auto k = trefoil();
  for (int i = 0; i < 256; ++i) {
    const double t = static_cast<double>(i) / 256;
    const FrameTriple f = k->frenet_frame(t);
    CHECK(std::abs(f.e1.norm() - 1.0) < 1e-10);
    CHECK(std::abs(f.e2.norm() - 1.0) < 1e-10);
    CHECK(std::abs(f.e3.norm() - 1.0) < 1e-10);
    CHECK(std::abs(dot(f.e1, f.e2)) < 1e-10);
    CHECK(std::abs(dot(f.e1, f.e3)) < 1e-10);
    CHECK(std::abs(dot(f.e2, f.e3)) < 1e-10);
    CHECK(triple(f.e1, f.e2, f.e3) > 0.0);
    CHECK(dot(f.e2, k->derivative(t, 2)) > 0.0);
  }
}

TEST_CASE("frenet frame undefined at a curvature zero") {
  PerturbedCircleCurve dip(1.0, 0.1, 3);
  CHECK_THROWS_AS(dip.frenet_frame(0.5), FrameUndefined);
}

TEST_CASE("arclength of circles") {
  CHECK(CircleCurve(1.0).arclength(256) == doctest::Approx(kTwoPi).epsilon(1e-10));
  CHECK(CircleCurve(3.0).arclength(256) == doctest::Approx(3.0 * kTwoPi).epsilon(1e-9));
  CHECK_THROWS_AS(CircleCurve(1.0).arclength(8), Error);
}

TEST_CASE("arclength self-converges on the trefoil") {
  auto k = trefoil();
  CHECK(std::abs(k->arclength(512) - k->arclength(1024)) < 1e-8);
}

TEST_CASE("periodicity of eval") {
  const std::vector<CurvePtr> curves = {
      std::make_shared<CircleCurve>(1.0), trefoil(),
      std::make_shared<PerturbedCircleCurve>(1.0, 0.05, 4, 0.08, 3),
      std::make_shared<SampledCurve>(selflink::testing::sample_points(*trefoil(), 256))};
  for (const auto& c : curves) {
    for (double t : {0.0, 0.125, 0.6, 0.99}) {
      CHECK((c->eval(t) - c->eval(t + 1.0)).norm() < 1e-12);
      CHECK((c->eval(t) - c->eval(t - 1.0)).norm() < 1e-12);
    }
  }
}

TEST_CASE("planar curves have zero torsion wherever defined") {
  PerturbedCircleCurve flower(1.0, 0.05, 5);
  for (int i = 0; i < 64; ++i) {
    const double t = (i + 0.5) / 64;
    CHECK(std::abs(flower.torsion(t)) < 1e-9);
  }
}

TEST_CASE("sampled curve reproduces the analytic trefoil") {
  auto k = trefoil();
  SampledCurve s(selflink::testing::sample_points(*k, 2048));
  for (double t : {0.05, 0.3, 0.62, 0.97}) {
    CHECK((s.eval(t) - k->eval(t)).norm() < 1e-9);
    CHECK((s.derivative(t, 1) - k->derivative(t, 1)).norm() <
          1e-7 * k->derivative(t, 1).norm());
    CHECK((s.derivative(t, 2) - k->derivative(t, 2)).norm() <
          1e-3 * k->derivative(t, 2).norm());
    // spline limit: third derivatives are piecewise constant
    CHECK((s.derivative(t, 3) - k->derivative(t, 3)).norm() <
          5e-2 * k->derivative(t, 3).norm());
    CHECK(s.curvature(t) == doctest::Approx(k->curvature(t)).epsilon(1e-4));
    CHECK(s.torsion(t) == doctest::Approx(k->torsion(t)).epsilon(5e-2));
  }
}

TEST_CASE("sampled curve rejects coincident non-adjacent samples") {
  auto pts = selflink::testing::sample_points(*trefoil(), 64);
  pts[30] = pts[10];
  CHECK_THROWS_AS(SampledCurve(std::move(pts)), Error);
}

TEST_CASE("make_curve validates specs") {
  CurveSpec spec;
  spec.kind = "torus_knot";
  spec.params = {{"p", 2}, {"q", 4}, {"R", 2}, {"r", 0.5}};
  CHECK_THROWS_AS(make_curve(spec), Error);  // gcd != 1
  spec.params = {{"p", 2}, {"q", 3}, {"R", 0.5}, {"r", 2}};
  CHECK_THROWS_AS(make_curve(spec), Error);  // r >= R
  spec.params = {{"p", 2}, {"q", 3}, {"R", 2}, {"r", 0.5}, {"bogus", 1}};
  CHECK_THROWS_AS(make_curve(spec), Error);  // unknown parameter
  spec.kind = "nonsense";
  spec.params.clear();
  CHECK_THROWS_AS(make_curve(spec), Error);

  CurveSpec circle;
  circle.kind = "circle";
  circle.params = {{"radius", 2.0}};
  CHECK((make_curve(circle)->eval(0.0) - Vec3{2, 0, 0}).norm() < 1e-15);
}

TEST_CASE("adaptors preserve derivatives exactly") {
  auto k = trefoil();
  auto mirror = std::make_shared<MirrorCurve>(k);
  auto reversed = std::make_shared<ReversedCurve>(k);
  auto shifted = std::make_shared<ShiftedCurve>(k, 0.37);
  for (double t : {0.1, 0.52}) {
    Vec3 m = k->eval(t);
    m.z = -m.z;
    CHECK((mirror->eval(t) - m).norm() == 0.0);
    CHECK((reversed->eval(t) - k->eval(-t)).norm() == 0.0);
    CHECK((reversed->derivative(t, 1) + k->derivative(-t, 1)).norm() == 0.0);
    CHECK((reversed->derivative(t, 2) - k->derivative(-t, 2)).norm() == 0.0);
    CHECK((shifted->eval(t) - k->eval(t + 0.37)).norm() == 0.0);
  }
}

TEST_CASE("stadium spline has vanishing curvature on the straight runs") {
  SampledCurve st(stadium_samples(1024));
  double kappa_min = 1e9;
  for (int i = 0; i < 1024; ++i) kappa_min = std::min(kappa_min, st.curvature(i / 1024.0));
  CHECK(kappa_min < 1e-6);
}
