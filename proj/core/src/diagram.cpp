#include "selflink/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "selflink/errors.hpp"

namespace selflink {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi (3 - sqrt 5)
constexpr int kMaxDirectionAttempts = 32;

// Internal control flow: any genericity violation aborts the current
// attempt and moves to the next direction in the retry schedule.
struct GenericityFailure {
  std::string reason;
};

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  double norm() const { return std::hypot(x, y); }
};

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct ProjectionFrame {
  Vec3 d, u, v;

  explicit ProjectionFrame(const Vec3& dir) : d(dir) { orthonormal_basis(d, u, v); }

  Vec2 plane(const Vec3& p) const { return {dot(p, u), dot(p, v)}; }
  double height(const Vec3& p) const { return dot(p, d); }
};

Vec3 perturbed_direction(const Vec3& d0, int attempt) {
  Vec3 u, v;
  orthonormal_basis(d0, u, v);
  const double phi = attempt * kGoldenAngle;
  const double delta = 0.02 + 0.01 * attempt;
  return (d0 * std::cos(delta) +
          (u * std::cos(phi) + v * std::sin(phi)) * std::sin(delta))
      .normalized();
}

double circular_distance(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

struct SegmentHit {
  int seg_a = 0, seg_b = 0;
  double alpha = 0.0, beta = 0.0;
};

// Proper-intersection test with a relative area threshold; near-zero
// orientation determinants under an overlapping bounding box count as
// non-generic rather than as a miss.
std::optional<SegmentHit> intersect_segments(const Vec2& p1, const Vec2& p2,
                                             const Vec2& q1, const Vec2& q2) {
  const double margin = 0.0;
  if (std::max(p1.x, p2.x) + margin < std::min(q1.x, q2.x) ||
      std::max(q1.x, q2.x) + margin < std::min(p1.x, p2.x) ||
      std::max(p1.y, p2.y) + margin < std::min(q1.y, q2.y) ||
      std::max(q1.y, q2.y) + margin < std::min(p1.y, p2.y))
    return std::nullopt;

  const Vec2 r = p2 - p1, s = q2 - q1;
  const double scale = r.norm() * s.norm();
  const double eps = 1e-12 * scale;

  const double d1 = cross2(s, p1 - q1);
  const double d2 = cross2(s, p2 - q1);
  const double d3 = cross2(r, q1 - p1);
  const double d4 = cross2(r, q2 - p1);
  if (std::abs(d1) < eps || std::abs(d2) < eps || std::abs(d3) < eps ||
      std::abs(d4) < eps)
    throw GenericityFailure{"near-degenerate segment pair"};

  if ((d1 > 0) == (d2 > 0) || (d3 > 0) == (d4 > 0)) return std::nullopt;

  const double denom = cross2(r, s);
  SegmentHit hit;
  hit.alpha = cross2(q1 - p1, s) / denom;
  hit.beta = cross2(q1 - p1, r) / denom;
  return hit;
}

// Bisection on the exact curves: re-chord the bracketing parameter
// intervals, intersect the chords, and recenter with halved width until
// the parameters are pinned to 1e-10.
void refine_crossing(const Curve& ca, const Curve& cb, const ProjectionFrame& frame,
                     double sa, double sb, double ta, double tb, double scale_2d,
                     double& s_out, double& t_out) {
  for (int iter = 0; iter < 64; ++iter) {
    const Vec2 a1 = frame.plane(ca.eval(sa));
    const Vec2 a2 = frame.plane(ca.eval(sb));
    const Vec2 b1 = frame.plane(cb.eval(ta));
    const Vec2 b2 = frame.plane(cb.eval(tb));
    const Vec2 r = a2 - a1, q = b2 - b1;
    const double denom = cross2(r, q);
    if (std::abs(denom) < 1e-14 * r.norm() * q.norm())
      throw GenericityFailure{"chords became parallel during refinement"};
    double alpha = cross2(b1 - a1, q) / denom;
    double beta = cross2(b1 - a1, r) / denom;
    if (alpha < -0.75 || alpha > 1.75 || beta < -0.75 || beta > 1.75)
      throw GenericityFailure{"crossing escaped its bracket during refinement"};
    alpha = std::clamp(alpha, 0.0, 1.0);
    beta = std::clamp(beta, 0.0, 1.0);

    const double s_star = sa + alpha * (sb - sa);
    const double t_star = ta + beta * (tb - ta);
    const double ws = (sb - sa) * 0.25;
    const double wt = (tb - ta) * 0.25;
    if (ws < 5e-11 && wt < 5e-11) {
      s_out = Curve::wrap(s_star);
      t_out = Curve::wrap(t_star);
      const double gap =
          (frame.plane(ca.eval(s_star)) - frame.plane(cb.eval(t_star))).norm();
      if (gap > 1e-9 * scale_2d)
        throw GenericityFailure{"refined crossing does not close"};
      return;
    }
    sa = s_star - ws;
    sb = s_star + ws;
    ta = t_star - wt;
    tb = t_star + wt;
  }
  throw GenericityFailure{"crossing refinement did not converge"};
}

struct StrandData {
  std::vector<Vec2> pts;
  std::vector<double> heights;
};

Diagram build_diagram(const std::vector<CurvePtr>& curves, const Vec3& direction,
                      int n) {
  const ProjectionFrame frame(direction);
  const int n_strands = static_cast<int>(curves.size());

  std::vector<StrandData> strands(n_strands);
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (int k = 0; k < n_strands; ++k) {
    strands[k].pts.resize(n);
    strands[k].heights.resize(n);
    for (int i = 0; i < n; ++i) {
      const Vec3 p = curves[k]->eval(static_cast<double>(i) / n);
      strands[k].pts[i] = frame.plane(p);
      strands[k].heights[i] = frame.height(p);
      lo_x = std::min(lo_x, strands[k].pts[i].x);
      hi_x = std::max(hi_x, strands[k].pts[i].x);
      lo_y = std::min(lo_y, strands[k].pts[i].y);
      hi_y = std::max(hi_y, strands[k].pts[i].y);
    }
  }
  const double scale_2d = std::hypot(hi_x - lo_x, hi_y - lo_y);

  double diameter = 0.0;
  for (int k = 0; k < n_strands; ++k) diameter = std::max(diameter, curves[k]->diameter());
  const double h_min = 1e-6 * diameter;

  struct RawHit {
    int strand_a, strand_b, seg_a, seg_b;
  };
  std::vector<RawHit> hits;

  auto scan_pair = [&](int ka, int kb, int ia, int ib) {
    const auto& A = strands[ka];
    const auto& B = strands[kb];
    const Vec2& p1 = A.pts[ia];
    const Vec2& p2 = A.pts[(ia + 1) % n];
    const Vec2& q1 = B.pts[ib];
    const Vec2& q2 = B.pts[(ib + 1) % n];
    if (intersect_segments(p1, p2, q1, q2))
      hits.push_back({ka, kb, ia, ib});
  };

  if (n_strands == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // adjacent across the wrap
        scan_pair(0, 0, i, j);
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scan_pair(0, 1, i, j);
  }

  Diagram diagram;
  diagram.direction = frame.d;
  diagram.curves = curves;
  diagram.strands.resize(n_strands);
  for (int k = 0; k < n_strands; ++k) {
    diagram.strands[k].resize(n);
    for (int i = 0; i < n; ++i)
      diagram.strands[k][i] = {strands[k].pts[i].x, strands[k].pts[i].y,
                               strands[k].heights[i]};
  }

  for (const RawHit& hit : hits) {
    Crossing c;
    c.strand_a = hit.strand_a;
    c.strand_b = hit.strand_b;
    const double h = 1.0 / n;
    refine_crossing(*curves[hit.strand_a], *curves[hit.strand_b], frame,
                    hit.seg_a * h, (hit.seg_a + 1) * h, hit.seg_b * h,
                    (hit.seg_b + 1) * h, scale_2d, c.s, c.t);

    // Genericity: refined crossings must stay away from the polyline
    // vertices so the picture is stable against resampling.
    const double sv = std::abs(c.s * n - std::round(c.s * n)) / n;
    const double tv = std::abs(c.t * n - std::round(c.t * n)) / n;
    if (sv < 1e-9 || tv < 1e-9)
      throw GenericityFailure{"crossing coincides with a polyline vertex"};

    const double hs = frame.height(curves[hit.strand_a]->eval(c.s));
    const double ht = frame.height(curves[hit.strand_b]->eval(c.t));
    c.height_gap = std::abs(hs - ht);
    if (c.height_gap <= h_min)
      throw GenericityFailure{"crossing heights are not separated"};
    c.over = hs > ht ? 0 : 1;

    const Vec3 da = curves[hit.strand_a]->derivative(c.s, 1);
    const Vec3 db = curves[hit.strand_b]->derivative(c.t, 1);
    const Vec2 ta2 = frame.plane(da);
    const Vec2 tb2 = frame.plane(db);
    const Vec2& over2 = c.over == 0 ? ta2 : tb2;
    const Vec2& under2 = c.over == 0 ? tb2 : ta2;
    const double det = cross2(over2, under2);
    if (std::abs(det) <= 1e-9 * over2.norm() * under2.norm())
      throw GenericityFailure{"projected tangents are parallel at a crossing"};
    c.sign = det > 0 ? 1 : -1;

    bool duplicate = false;
    for (const Crossing& prev : diagram.crossings) {
      if (prev.strand_a == c.strand_a && prev.strand_b == c.strand_b &&
          circular_distance(prev.s, c.s) < 1e-8 && circular_distance(prev.t, c.t) < 1e-8) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) diagram.crossings.push_back(c);
  }

  std::sort(diagram.crossings.begin(), diagram.crossings.end(),
            [](const Crossing& a, const Crossing& b) {
              if (a.strand_a != b.strand_a) return a.strand_a < b.strand_a;
              if (a.strand_b != b.strand_b) return a.strand_b < b.strand_b;
              if (a.s != b.s) return a.s < b.s;
              return a.t < b.t;
            });
  return diagram;
}

}  // namespace

Diagram project_diagram(std::vector<CurvePtr> curves, const Vec3& direction, int n) {
  if (curves.empty() || curves.size() > 2)
    throw Error("diagram projection takes one or two curves");
  for (const auto& c : curves)
    if (!c) throw Error("diagram projection given a null curve");
  if (n < 256) throw Error("diagram projection needs at least 256 points per strand");
  const double dn = direction.norm();
  if (dn <= 0.0) throw Error("projection direction must be nonzero");
  const Vec3 d0 = direction / dn;

  std::vector<Vec3> tried;
  for (int attempt = 0; attempt < kMaxDirectionAttempts; ++attempt) {
    const Vec3 d = attempt == 0 ? d0 : perturbed_direction(d0, attempt);
    tried.push_back(d);
    try {
      return build_diagram(curves, d, n);
    } catch (const GenericityFailure&) {
      continue;
    }
  }
  throw NonGenericDirection(std::move(tried));
}

int crossing_sign(const Diagram& diagram, const Crossing& crossing) {
  const ProjectionFrame frame(diagram.direction);
  const Curve& ca = *diagram.curves.at(crossing.strand_a);
  const Curve& cb = *diagram.curves.at(crossing.strand_b);
  const Vec2 ta2 = frame.plane(ca.derivative(crossing.s, 1));
  const Vec2 tb2 = frame.plane(cb.derivative(crossing.t, 1));
  const Vec2& over2 = crossing.over == 0 ? ta2 : tb2;
  const Vec2& under2 = crossing.over == 0 ? tb2 : ta2;
  const double det = cross2(over2, under2);
  if (std::abs(det) <= 1e-9 * over2.norm() * under2.norm())
    throw DegenerateCrossing("projected tangents are parallel at the crossing");
  return det > 0 ? 1 : -1;
}

long diagram_writhe(const CurvePtr& curve, const Vec3& direction, int n) {
  const Diagram d = project_diagram({curve}, direction, n);
  long sum = 0;
  for (const Crossing& c : d.crossings) sum += c.sign;
  return sum;
}

long combinatorial_linking(const CurvePtr& c0, const CurvePtr& c1,
                           const Vec3& direction, int n) {
  const Diagram d = project_diagram({c0, c1}, direction, n);
  long sum = 0;
  for (const Crossing& c : d.crossings) sum += c.sign;
  if (sum % 2 != 0) throw OddCrossingParity(sum);
  return sum / 2;
}

// --- cross-tangents ---

namespace {

Vec3 pick_frame_direction(const Curve& curve) {
  constexpr int kScan = 2048;
  Vec3 candidate{0, 0, 1};
  for (int attempt = 0; attempt < kMaxDirectionAttempts; ++attempt) {
    const Vec3 e = attempt == 0 ? candidate : perturbed_direction(candidate, attempt);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
      worst = std::min(worst,
                       cross(e, curve.unit_tangent(static_cast<double>(i) / kScan)).norm());
      if (worst <= 1e-3) break;
    }
    if (worst > 1e-3) return e;
  }
  throw Error("no usable normal-plane frame direction for the cross-tangent scan");
}

struct ReducedMap {
  const Curve& curve;
  Vec3 e;  // fixed seed for the s-dependent normal frame

  // F(s,t) = (Phi.u(s), Phi.v(s)) with (u, v, t^) right-handed; fwd is
  // Phi . t^(s), positive on the forward-looking sheet.
  void eval(double s, double t, double& f1, double& f2, double& fwd) const {
    const Vec3 that = curve.unit_tangent(s);
    const Vec3 w = e - that * dot(e, that);
    const Vec3 u = w.normalized();
    const Vec3 v = cross(that, u);
    const Vec3 r = curve.eval(t) - curve.eval(s);
    const Vec3 phi = r / r.norm();
    f1 = dot(phi, u);
    f2 = dot(phi, v);
    fwd = dot(phi, that);
  }
};

bool strict_straddle(double a, double b, double c, double d) {
  const double lo = std::min(std::min(a, b), std::min(c, d));
  const double hi = std::max(std::max(a, b), std::max(c, d));
  return lo < 0.0 && hi > 0.0;
}

}  // namespace

CrossTangentResult cross_tangent_count(const Curve& curve, int n_grid) {
  if (n_grid < 256) throw Error("cross-tangent scan needs a grid of at least 256");
  const ReducedMap F{curve, pick_frame_direction(curve)};

  // Staggered offsets keep the grid off the diagonal; later entries are
  // the deterministic retries for exact zeros on grid nodes.
  constexpr double kOffsets[][2] = {{0.0, 0.5}, {0.23, 0.71}, {0.37, 0.11}, {0.81, 0.43}};
  constexpr int kOffsetAttempts = 4;

  const int n = n_grid;
  const double h = 1.0 / n;

  for (int attempt = 0; attempt < kOffsetAttempts; ++attempt) {
    const double off_s = kOffsets[attempt][0];
    const double off_t = kOffsets[attempt][1];

    std::vector<double> f1(static_cast<size_t>(n) * n), f2(f1.size()), fwd(f1.size());
    long exact_zero_1 = 0, exact_zero_2 = 0;
    for (int i = 0; i < n; ++i) {
      const double s = (i + off_s) * h;
      for (int j = 0; j < n; ++j) {
        const double t = (j + off_t) * h;
        const size_t idx = static_cast<size_t>(i) * n + j;
        F.eval(s, t, f1[idx], f2[idx], fwd[idx]);
        if (f1[idx] == 0.0) ++exact_zero_1;
        if (f2[idx] == 0.0) ++exact_zero_2;
      }
    }
    // A sprinkling of exact zeros makes the sign test ambiguous, so shift
    // the grid; a whole zero component (planar curves) is fine because the
    // strict straddle test then finds no candidates.
    const long sparse_limit = 2L * n;
    if ((exact_zero_1 > 0 && exact_zero_1 <= sparse_limit) ||
        (exact_zero_2 > 0 && exact_zero_2 <= sparse_limit)) {
      if (attempt + 1 < kOffsetAttempts) continue;
      throw ZeroOnGridLine("reduced map vanishes exactly on grid nodes for every offset");
    }

    CrossTangentResult result;
    auto at = [&](int i, int j) -> size_t {
      return static_cast<size_t>((i + n) % n) * n + ((j + n) % n);
    };

    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double sc = (i + off_s + 0.5) * h;
        const double tc = (j + off_t + 0.5) * h;
        if (circular_distance(sc, tc) <= 2.5 * h) continue;

        const size_t c00 = at(i, j), c10 = at(i + 1, j), c01 = at(i, j + 1),
                     c11 = at(i + 1, j + 1);
        if (!strict_straddle(f1[c00], f1[c10], f1[c01], f1[c11])) continue;
        if (!strict_straddle(f2[c00], f2[c10], f2[c01], f2[c11])) continue;
        if (fwd[c00] <= 0 && fwd[c10] <= 0 && fwd[c01] <= 0 && fwd[c11] <= 0) continue;

        // Newton refinement with a central-difference Jacobian.
        double s = sc, t = tc;
        const double step = 1e-7;
        bool converged = false;
        double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
        for (int iter = 0; iter < 60; ++iter) {
          double g1, g2, gf;
          F.eval(s, t, g1, g2, gf);
          if (std::abs(g1) < 1e-12 && std::abs(g2) < 1e-12) {
            converged = true;
            break;
          }
          double a1, a2, b1, b2, dummy;
          F.eval(s + step, t, a1, a2, dummy);
          F.eval(s - step, t, b1, b2, dummy);
          j11 = (a1 - b1) / (2 * step);
          j21 = (a2 - b2) / (2 * step);
          F.eval(s, t + step, a1, a2, dummy);
          F.eval(s, t - step, b1, b2, dummy);
          j12 = (a1 - b1) / (2 * step);
          j22 = (a2 - b2) / (2 * step);
          const double det = j11 * j22 - j12 * j21;
          if (std::abs(det) < 1e-14) break;
          double ds = (-g1 * j22 + g2 * j12) / det;
          double dt = (-g2 * j11 + g1 * j21) / det;
          const double clamp = 1.5 * h;
          ds = std::clamp(ds, -clamp, clamp);
          dt = std::clamp(dt, -clamp, clamp);
          s += ds;
          t += dt;
          if (circular_distance(s, sc) > 3.0 * h || circular_distance(t, tc) > 3.0 * h)
            break;  // drifted into a neighbouring basin; that cell will find it
          if (circular_distance(s, t) < 0.5 * h) break;  // fell toward the diagonal
        }
        if (!converged) continue;

        double g1, g2, gf;
        s = Curve::wrap(s);
        t = Curve::wrap(t);
        F.eval(s, t, g1, g2, gf);
        if (gf <= 1e-6) continue;
        if (circular_distance(s, t) <= 1.5 * h) continue;

        bool duplicate = false;
        for (const CrossTangentZero& z : result.zeros) {
          if (circular_distance(z.s, s) < 1e-6 && circular_distance(z.t, t) < 1e-6) {
            duplicate = true;
            break;
          }
        }
        if (duplicate) continue;

        const double det = j11 * j22 - j12 * j21;
        const double row_scale = std::hypot(j11, j12) * std::hypot(j21, j22);
        if (std::abs(det) < 1e-7 * std::max(row_scale, 1e-30)) {
          result.reliable = false;  // non-isolated zero: degree undefined here
          continue;
        }
        result.zeros.push_back({s, t, det > 0 ? 1 : -1});
      }
    }

    for (const CrossTangentZero& z : result.zeros) result.count += z.sign;
    std::sort(result.zeros.begin(), result.zeros.end(),
              [](const CrossTangentZero& a, const CrossTangentZero& b) {
                return a.s != b.s ? a.s < b.s : a.t < b.t;
              });
    return result;
  }
  throw ZeroOnGridLine("unreachable");
}

}  // namespace selflink
