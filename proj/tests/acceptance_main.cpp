// Acceptance suite: one line per criterion, pass/fail, with the measured
// numbers. Exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "selflink/curve.hpp"
#include "selflink/diagram.hpp"
#include "selflink/errors.hpp"
#include "selflink/framing.hpp"
#include "selflink/invariant.hpp"
#include "selflink/quadrature.hpp"

using namespace selflink;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
  std::printf("%s [C%d] %s — %s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

void run(int id, const std::string& label,
         const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(id, pass, label, detail);
  } catch (const std::exception& e) {
    report(id, false, label, std::string("exception: ") + e.what());
  }
}

struct Fixture {
  std::string name;
  CurvePtr curve;
  FramingPtr framing;
};

std::vector<Fixture> make_fixtures() {
  auto circle = std::make_shared<CircleCurve>(1.0);
  auto trefoil = std::make_shared<TorusKnotCurve>(2, 3, 2.0, 0.5);
  auto tk32 = std::make_shared<TorusKnotCurve>(3, 2, 2.0, 0.5);
  auto flat = projection_framing(circle, {0, 0, 1});
  return {
      {"circle+twist0", circle, add_twists(flat, 0)},
      {"circle+twist1", circle, add_twists(flat, 1)},
      {"circle+twist3", circle, add_twists(flat, 3)},
      {"trefoil+frenet", trefoil, frenet_framing(trefoil)},
      {"trefoil+projection_z", trefoil, projection_framing(trefoil, {0, 0, 1})},
      {"torus32+frenet", tk32, frenet_framing(tk32)},
  };
}

QuadratureConfig config(int n) {
  QuadratureConfig cfg;
  cfg.n = n;
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const auto fixtures = make_fixtures();
  auto trefoil = std::make_shared<TorusKnotCurve>(2, 3, 2.0, 0.5);
  auto tk32 = std::make_shared<TorusKnotCurve>(3, 2, 2.0, 0.5);
  auto circle = std::make_shared<CircleCurve>(1.0);
  auto hopf = std::make_shared<CircleCurve>(1.0, Vec3{1, 0, 0}, Vec3{0, 1, 0});

  // C1: eta + tau_phi matches the combinatorial pushoff linking to 1e-2
  // at n=512, each fixture within the 10 s budget.
  run(1, "analytic self-link matches the pushoff crossing count (n=512, 1e-2)", [&] {
    bool pass = true;
    std::ostringstream detail;
    QuadratureConfig serial = config(512);
    serial.parallel = false;  // the time budget is for a single core
    for (const Fixture& f : fixtures) {
      const auto t0 = std::chrono::steady_clock::now();
      const double eta = writhe_integral(*f.curve, serial).value;
      const double tau = twist_integral(*f.framing, 512);
      const double eps = choose_pushoff_epsilon(f.curve, f.framing);
      const CurvePtr push = pushoff(f.framing, eps);
      const long oracle = combinatorial_linking(f.curve, push, {0, 0, 1});
      const double gap = std::abs(eta + tau - oracle);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const bool ok = gap < 1e-2 && secs < 10.0;
      pass = pass && ok;
      detail << f.name << " gap=" << fmt(gap) << " (" << fmt(secs) << "s) ";
    }
    return std::pair{pass, detail.str()};
  });

  // C2: residual < 1e-2 at n=512 and < 3e-3 at n=1024, improving with n.
  run(2, "integer-valuedness residuals shrink from n=512 to n=1024", [&] {
    bool pass = true;
    std::ostringstream detail;
    OracleOptions no_oracle;
    no_oracle.enabled = false;
    for (const Fixture& f : fixtures) {
      const double r512 = self_link(f.curve, f.framing, config(512), no_oracle).residual;
      const double r1024 = self_link(f.curve, f.framing, config(1024), no_oracle).residual;
      const bool ok = r512 < 1e-2 && r1024 < 3e-3 && r1024 <= r512 + 1e-12;
      pass = pass && ok;
      detail << f.name << " " << fmt(r512) << "->" << fmt(r1024) << " ";
    }
    return std::pair{pass, detail.str()};
  });

  // C3: twist-shift moves sl by exactly k.
  run(3, "sl(add_twists(f,k)) - sl(f) = k for k in {-2,-1,1,2}", [&] {
    bool pass = true;
    std::ostringstream detail;
    OracleOptions no_oracle;
    no_oracle.enabled = false;
    const std::vector<std::pair<CurvePtr, FramingPtr>> cases = {
        {circle, projection_framing(circle, {0, 0, 1})},
        {trefoil, frenet_framing(trefoil)}};
    for (const auto& [curve, framing] : cases) {
      const long base = self_link(curve, framing, config(512), no_oracle).sl;
      for (int k : {-2, -1, 1, 2}) {
        const long shifted =
            self_link(curve, add_twists(framing, k), config(512), no_oracle).sl;
        if (shifted - base != k) {
          pass = false;
          detail << "k=" << k << " got " << (shifted - base) << " ";
        }
      }
    }
    if (pass) detail << "all exact";
    return std::pair{pass, detail.str()};
  });

  // C4: the Frenet framing's twist equals the total torsion.
  run(4, "twist(frenet) = total torsion (1e-6 at n=2048; 1e-10 on the circle)", [&] {
    const double g1 = std::abs(twist_integral(*frenet_framing(trefoil), 2048) -
                               total_torsion(*trefoil, 2048));
    const double g2 = std::abs(twist_integral(*frenet_framing(tk32), 2048) -
                               total_torsion(*tk32, 2048));
    const double c1 = std::abs(twist_integral(*frenet_framing(circle), 2048));
    const double c2 = std::abs(total_torsion(*circle, 2048));
    const bool pass = g1 < 1e-6 && g2 < 1e-6 && c1 < 1e-10 && c2 < 1e-10;
    return std::pair{pass, "trefoil gap=" + fmt(g1) + " torus32 gap=" + fmt(g2) +
                               " circle |twist|=" + fmt(c1) + " |torsion|=" + fmt(c2)};
  });

  // C5: sl constant along both isotopy families while eta moves on at
  // least one of them.
  run(5, "sl constant along isotopy families while eta varies", [&] {
    FramingSpec proj;
    proj.kind = "projection";
    proj.direction = {1, 1, 1};
    FramingSpec frenet;
    frenet.kind = "frenet";
    const IsotopyFamily circle_family{circle, 2, 0.1, {0, 0, 1}, 0.0};
    const IsotopyFamily trefoil_family{trefoil, 3, 0.05, {0, 0, 1}, 0.0};
    const std::vector<double> u = {0, 0.25, 0.5, 0.75, 1.0};
    const InvarianceVerdict a = verify_invariance(circle_family, proj, config(512), u);
    const InvarianceVerdict b = verify_invariance(trefoil_family, frenet, config(512), u);
    const double spread = std::max(a.eta_spread, b.eta_spread);
    const bool pass = a.pass && b.pass && spread > 1e-3;
    return std::pair{pass, "circle sl=" + std::to_string(a.sl[0]) +
                               " spread=" + fmt(a.eta_spread) +
                               "; trefoil sl=" + std::to_string(b.sl[0]) +
                               " spread=" + fmt(b.eta_spread)};
  });

  // C6: blackboard identity, exact integers, 4 generic directions per knot.
  run(6, "projection-framed sl equals the diagram writhe (4 directions/knot)", [&] {
    const std::vector<Vec3> dirs = {{0, 0, 1}, {0.3, 0.2, 0.93}, {1, 2, 3}, {-2, 1, 2}};
    bool pass = true;
    std::ostringstream detail;
    for (const CurvePtr& knot : {CurvePtr(trefoil), CurvePtr(tk32)}) {
      const double eta = writhe_integral(*knot, config(512)).value;
      for (const Vec3& d : dirs) {
        const double tau = twist_integral(*projection_framing(knot, d), 512);
        const long sl = std::lround(eta + tau);
        const long wr = diagram_writhe(knot, d);
        if (sl != wr) {
          pass = false;
          detail << "mismatch sl=" << sl << " wr=" << wr << " ";
        }
      }
    }
    if (pass) detail << "all 8 identities exact";
    return std::pair{pass, detail.str()};
  });

  // C7: lift class flips under odd twists, holds under even ones; the
  // flat-framed circle is the nontrivial 2-pi rotation loop.
  run(7, "SO(3) lift class parity under twisting", [&] {
    bool pass =
        so3_lift_class(*projection_framing(circle, {0, 0, 1})) == LiftClass::nontrivial;
    std::ostringstream detail;
    detail << "circle+const=nontrivial ";
    std::ostringstream correlation;
    OracleOptions no_oracle;
    no_oracle.enabled = false;
    for (const Fixture& f : fixtures) {
      const LiftClass base = so3_lift_class(*f.framing);
      const bool ok = so3_lift_class(*add_twists(f.framing, 1)) != base &&
                      so3_lift_class(*add_twists(f.framing, -1)) != base &&
                      so3_lift_class(*add_twists(f.framing, 2)) == base &&
                      so3_lift_class(*add_twists(f.framing, -2)) == base;
      if (!ok) detail << f.name << " parity broken ";
      pass = pass && ok;
      const long sl = self_link(f.curve, f.framing, config(512), no_oracle).sl;
      correlation << f.name << ":" << to_string(base) << "/sl=" << sl << " ";
    }
    if (pass) detail << "parity holds on all fixtures";
    // recorded, not asserted: class vs sl parity across fixtures
    std::printf("info [C7] class/sl-parity pairs: %s\n", correlation.str().c_str());
    return std::pair{pass, detail.str()};
  });

  // C8: diagram integers are stable across n in {512,1024,2048} and 8
  // generic directions; inter-strand parity is always even (a violation
  // throws OddCrossingParity and fails the criterion).
  run(8, "diagram integers stable across resolutions and 8 directions", [&] {
    const Vec3 dirs[8] = {{0, 0, 1},        {0.3, 0.2, 0.93}, {1, 2, 3},
                          {-2, 1, 2},       {0.2, -0.5, 0.9}, {1, -1, 3},
                          {-1, -2, 4},      {0.7, 0.1, -1}};
    bool pass = true;
    std::ostringstream detail;
    for (const auto& [name, knot, expected] :
         {std::tuple<std::string, CurvePtr, long>{"trefoil", trefoil, -3},
          {"torus32", tk32, -4}}) {
      for (const Vec3& d : dirs)
        for (int n : {512, 1024, 2048})
          if (diagram_writhe(knot, d, n) != expected) {
            pass = false;
            detail << name << " unstable ";
          }
      detail << name << "=" << expected << " ";
    }
    for (const Vec3& d : dirs)
      for (int n : {512, 1024, 2048})
        if (combinatorial_linking(circle, hopf, d, n) != 1) {
          pass = false;
          detail << "hopf unstable ";
        }
    detail << "hopf=1";
    return std::pair{pass, detail.str()};
  });

  // C9: observed convergence order of the trefoil writhe >= 2 between
  // n=256 and n=1024; Hopf linking within 1e-4 of its integer at n=512.
  run(9, "writhe order >= 2 on the trefoil; Hopf linking within 1e-4", [&] {
    QuadratureConfig plain = config(256);
    plain.richardson = false;
    auto writhe_at = [&](int n) {
      QuadratureConfig c = plain;
      c.n = n;
      return writhe_integral(*trefoil, c).value;
    };
    const double i256 = writhe_at(256), i512 = writhe_at(512), i1024 = writhe_at(1024);
    const double order = std::log2(std::abs((i256 - i512) / (i512 - i1024)));
    const double hopf_gap =
        std::abs(linking_integral(*circle, *hopf, config(512)).value - 1.0);
    const bool pass = order >= 2.0 && hopf_gap < 1e-4;
    return std::pair{pass, "order=" + fmt(order) + " hopf gap=" + fmt(hopf_gap)};
  });

  // C10: cross-tangent counts stable under grid doubling; the ratio
  // count/sl(frenet) agrees across the two knots (value recorded).
  run(10, "cross-tangent counts stable; count/sl ratio consistent", [&] {
    OracleOptions no_oracle;
    no_oracle.enabled = false;
    const CrossTangentResult a256 = cross_tangent_count(*trefoil, 256);
    const CrossTangentResult a512 = cross_tangent_count(*trefoil, 512);
    const CrossTangentResult b256 = cross_tangent_count(*tk32, 256);
    const CrossTangentResult b512 = cross_tangent_count(*tk32, 512);
    const long sl_a = self_link(trefoil, frenet_framing(trefoil), config(512), no_oracle).sl;
    const long sl_b = self_link(tk32, frenet_framing(tk32), config(512), no_oracle).sl;
    const bool stable = a256.count == a512.count && b256.count == b512.count &&
                        a256.reliable && b256.reliable;
    // equality of count_a/sl_a and count_b/sl_b without dividing
    const bool consistent = a256.count * sl_b == b256.count * sl_a;
    std::ostringstream detail;
    detail << "trefoil count=" << a256.count << " sl=" << sl_a
           << "; torus32 count=" << b256.count << " sl=" << sl_b;
    if (consistent && sl_a != 0)
      detail << "; recorded ratio=" << static_cast<double>(a256.count) / sl_a;
    return std::pair{stable && consistent, detail.str()};
  });

  if (g_failures == 0)
    std::printf("acceptance: all 10 criteria pass\n");
  else
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return g_failures;
}
