#include "selflink/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "selflink/errors.hpp"

namespace selflink {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

struct GridSamples {
  std::vector<Vec3> p, d;
};

GridSamples sample_grid(const Curve& c, int n) {
  GridSamples g;
  g.p.resize(n);
  g.d.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    g.p[i] = c.eval(t);
    g.d[i] = c.derivative(t, 1);
  }
  return g;
}

struct PairSum {
  double total = 0.0;
  double min_dist2 = std::numeric_limits<double>::infinity();
};

// Core double sum. Row sums are accumulated independently and combined in
// row order, so the single-threaded and parallel paths produce identical
// bits. `same_curve` zeroes the diagonal and tracks the non-adjacent
// minimum distance; otherwise the minimum is over all pairs.
PairSum pair_sum(const GridSamples& A, const GridSamples& B, bool same_curve,
                 int step, int threads) {
  const int n = static_cast<int>(A.p.size());
  const int rows = n / step;
  std::vector<double> row_sum(rows, 0.0);
  std::vector<double> row_min(rows, std::numeric_limits<double>::infinity());

  auto run_rows = [&](int row_begin, int row_end) {
    for (int ri = row_begin; ri < row_end; ++ri) {
      const int i = ri * step;
      const Vec3 pi = A.p[i];
      const Vec3 di = A.d[i];
      double sum = 0.0;
      double mind2 = std::numeric_limits<double>::infinity();
      for (int rj = 0; rj < rows; ++rj) {
        const int j = rj * step;
        if (same_curve && i == j) continue;
        const Vec3 r = pi - B.p[j];
        const double d2 = r.norm_squared();
        if (same_curve) {
          const int gap = std::abs(i - j);
          if (gap > 1 && gap < n - 1 && d2 < mind2) mind2 = d2;
        } else if (d2 < mind2) {
          mind2 = d2;
        }
        const double d1 = std::sqrt(d2);
        sum += dot(cross(di, B.d[j]), r) / (d2 * d1);
      }
      row_sum[ri] = sum;
      row_min[ri] = mind2;
    }
  };

  if (threads <= 1 || rows < 2) {
    run_rows(0, rows);
  } else {
    const int nt = std::min(threads, rows);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int k = 0; k < nt; ++k) {
      const int b = rows * k / nt;
      const int e = rows * (k + 1) / nt;
      pool.emplace_back(run_rows, b, e);
    }
    for (auto& th : pool) th.join();
  }

  PairSum out;
  for (int ri = 0; ri < rows; ++ri) {
    out.total += row_sum[ri];
    out.min_dist2 = std::min(out.min_dist2, row_min[ri]);
  }
  return out;
}

int effective_threads(const QuadratureConfig& cfg) {
  if (!cfg.parallel || cfg.n < 256) return 1;
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

void QuadratureConfig::validate() const {
  if (n < 32 || n % 2 != 0) throw Error("quadrature n must be even and at least 32");
}

Vec3 gauss_map(const Curve& c0, const Curve& c1, double s, double t) {
  const Vec3 r = c1.eval(t) - c0.eval(s);
  const double n = r.norm();
  if (n <= 1e-12)
    throw CoincidentPoints("gauss map undefined: points at s=" + std::to_string(s) +
                           ", t=" + std::to_string(t) + " coincide");
  return r / n;
}

Vec3 gauss_map_extended(const Curve& curve, double s, DiagonalSide side) {
  const Vec3 d = curve.derivative(s, 1);
  const double n = d.norm();
  if (n <= 1e-9) throw Error("curve speed vanishes at t=" + std::to_string(s));
  return side == DiagonalSide::plus ? d / n : d / -n;
}

// Orientation: with right-handed curve orientations the Hopf pair links
// +1, matching both the right-hand rule and the diagram convention.
double linking_integrand(const Curve& c0, const Curve& c1, double s, double t) {
  const Vec3 r = c0.eval(s) - c1.eval(t);
  const double d2 = r.norm_squared();
  const double d1 = std::sqrt(d2);
  return dot(cross(c0.derivative(s, 1), c1.derivative(t, 1)), r) / (d2 * d1);
}

IntegralResult linking_integral(const Curve& c0, const Curve& c1,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const GridSamples A = sample_grid(c0, n);
  const GridSamples B = sample_grid(c1, n);
  const int threads = effective_threads(cfg);

  const PairSum full = pair_sum(A, B, false, 1, threads);
  if (std::sqrt(full.min_dist2) <= 1e-6)
    throw CurvesIntersect("curves are closer than 1e-6 at resolution " + std::to_string(n));

  IntegralResult out;
  out.value = full.total / (kFourPi * n * n);
  out.n_used = n;
  if (cfg.richardson) {
    const PairSum half = pair_sum(A, B, false, 2, threads);
    const double half_n = n / 2.0;
    out.error_estimate = std::abs(out.value - half.total / (kFourPi * half_n * half_n));
  }
  return out;
}

IntegralResult writhe_integral(const Curve& curve, const QuadratureConfig& cfg) {
  cfg.validate();
  const int n = cfg.n;
  const GridSamples A = sample_grid(curve, n);
  const int threads = effective_threads(cfg);

  const PairSum full = pair_sum(A, A, true, 1, threads);
  if (std::sqrt(full.min_dist2) <= 1e-6)
    throw SelfIntersection("curve is not embedded at resolution " + std::to_string(n));

  IntegralResult out;
  out.value = full.total / (kFourPi * n * n);
  out.n_used = n;
  if (cfg.richardson) {
    const PairSum half = pair_sum(A, A, true, 2, threads);
    const double half_n = n / 2.0;
    out.error_estimate = std::abs(out.value - half.total / (kFourPi * half_n * half_n));
  }
  return out;
}

std::vector<std::pair<int, double>> convergence_study(
    const std::function<double(int)>& value_at_n, const std::vector<int>& n_list) {
  if (n_list.empty()) throw Error("convergence study needs a nonempty n list");
  for (size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] % 2 != 0) throw Error("convergence study n values must be even");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw Error("convergence study n values must be strictly increasing");
  }
  std::vector<std::pair<int, double>> out;
  out.reserve(n_list.size());
  for (int n : n_list) out.emplace_back(n, value_at_n(n));
  return out;
}

}  // namespace selflink
