#include "qpsl/bands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "qpsl/asymptotics.hpp"
#include "qpsl/errors.hpp"
#include "qpsl/matrix_structure.hpp"

namespace qpsl {

namespace {

int worker_count() {
  if (const char* env = std::getenv("QPSL_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// One pairing outcome per (k, j) at a single grid point.
struct GridColumn {
  std::vector<BandPoint> points;
};

BandPoint extrapolate(double t, const BandPoint& a, const BandPoint& b) {
  // linear in t through (a, b)
  BandPoint out;
  out.t = t;
  out.extrapolated = true;
  out.matched = true;
  const double span = b.t - a.t;
  out.lambda = a.lambda + (b.lambda - a.lambda) * ((t - a.t) / span);
  out.deviation = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace

std::vector<double> default_t_grid(int points_per_half) {
  if (points_per_half < 1)
    throw ConfigError("band grid needs at least one point per half-interval");
  std::vector<double> grid;
  const double h = kPi / points_per_half;
  for (int half = 0; half < 2; ++half)
    for (int i = 0; i < points_per_half; ++i)
      grid.push_back(half * kPi + (i + 0.5) * h);
  return grid;
}

BandFamily sweep(const PotentialSpec& spec, const std::vector<double>& t_grid,
                 const std::vector<int>& k_range, int K, double rho) {
  if (t_grid.empty()) throw ConfigError("band sweep needs a nonempty grid");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw ConfigError("band grid must be strictly increasing");
  if (rho < 0.0) rho = default_disk_rho(spec);

  const MeanMatrixAnalysis mean = analyze_mean_matrix(mean_matrix(spec));
  const int branches = mean.primal.distinct_count();

  std::vector<GridColumn> columns(t_grid.size());
  std::atomic<size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_lock;

  auto work = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= t_grid.size() || failed.load()) return;
      try {
        const double t = t_grid[i];
        const auto pairs = eigen_solve(assemble(spec, t, K));
        const auto preds = predict(mean, t, k_range, rho);
        const auto report = pair_eigenvalues(pairs, preds);
        GridColumn column;
        for (int k : k_range)
          for (int j = 0; j < branches; ++j) {
            BandPoint point;
            point.t = t;
            const Assignment* a = report.find(k, j);
            if (a != nullptr && a->full) {
              // multiplicity > 1: report the member nearest the center
              const Prediction& pred = report.predictions[a->prediction_index];
              int best = a->pair_indices[0];
              for (int idx : a->pair_indices)
                if (std::abs(pairs[idx].lambda - pred.center) <
                    std::abs(pairs[best].lambda - pred.center))
                  best = idx;
              point.lambda = pairs[best].lambda;
              point.matched = true;
              point.deviation = std::abs(point.lambda - pred.center);
            }
            column.points.push_back(point);
          }
        columns[i] = std::move(column);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> guard(failure_lock);
        failed.store(true);
        failure = e.what();
      }
    }
  };

  const int workers =
      std::min<int>(worker_count(), static_cast<int>(t_grid.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& thread : threads) thread.join();
  }
  if (failed.load()) throw SolverError("band sweep failed: " + failure);

  BandFamily family;
  family.t_grid = t_grid;
  family.K = K;
  family.m = spec.m;

  // Thread curves through the grid columns and close each half-interval
  // with extrapolated endpoint values.
  int slot = 0;
  for (int k : k_range)
    for (int j = 0; j < branches; ++j, ++slot) {
      BandCurve curve;
      curve.k = k;
      curve.j = j;
      std::vector<BandPoint> raw;
      for (size_t i = 0; i < t_grid.size(); ++i)
        raw.push_back(columns[i].points[slot]);

      const double boundaries[] = {0.0, kPi, kTwoPi};
      std::vector<BandPoint> assembled;
      for (int half = 0; half < 2; ++half) {
        std::vector<BandPoint> side;
        for (const BandPoint& p : raw)
          if (p.t > boundaries[half] && p.t < boundaries[half + 1])
            side.push_back(p);
        if (side.empty()) continue;
        if (side.size() >= 2 && side[0].matched && side[1].matched)
          assembled.push_back(extrapolate(boundaries[half], side[0], side[1]));
        assembled.insert(assembled.end(), side.begin(), side.end());
        const size_t n = side.size();
        if (n >= 2 && side[n - 1].matched && side[n - 2].matched)
          assembled.push_back(
              extrapolate(boundaries[half + 1], side[n - 2], side[n - 1]));
      }
      curve.points = std::move(assembled);

      // Jump detection: a step is flagged when it exceeds ten times the
      // neighboring step's slope (plus a small absolute floor).
      const auto& pts = curve.points;
      std::vector<double> slopes(pts.size(), -1.0);
      for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].matched && pts[i - 1].matched && pts[i].t > pts[i - 1].t)
          slopes[i] = std::abs(pts[i].lambda - pts[i - 1].lambda) /
                      (pts[i].t - pts[i - 1].t);
      for (size_t i = 1; i < pts.size(); ++i) {
        if (!pts[i].matched || !pts[i - 1].matched) {
          curve.continuous = false;
          continue;
        }
        double reference = -1.0;
        if (i >= 2 && slopes[i - 1] >= 0.0) reference = slopes[i - 1];
        if (reference < 0.0 && i + 1 < pts.size() && slopes[i + 1] >= 0.0)
          reference = slopes[i + 1];
        if (reference < 0.0) continue;
        const double step = pts[i].t - pts[i - 1].t;
        const double floor = 1e-6 * (1.0 + std::abs(pts[i].lambda));
        if (std::abs(pts[i].lambda - pts[i - 1].lambda) >
            10.0 * step * reference + floor) {
          curve.jump_indices.push_back(static_cast<int>(i));
          curve.continuous = false;
        }
      }
      family.curves.push_back(std::move(curve));
    }
  return family;
}

RealBands band_union_real(const BandFamily& family, double lo, double hi,
                          double merge_tol, double imag_tol) {
  if (!(lo < hi)) throw ConfigError("band window must have lo < hi");
  std::vector<std::pair<double, double>> segments;
  for (const BandCurve& curve : family.curves) {
    const auto& pts = curve.points;
    auto usable = [&](const BandPoint& p) {
      return p.matched &&
             std::abs(p.lambda.imag()) <= imag_tol * (1.0 + std::abs(p.lambda));
    };
    for (size_t i = 1; i < pts.size(); ++i) {
      if (!usable(pts[i]) || !usable(pts[i - 1])) continue;
      if (std::find(curve.jump_indices.begin(), curve.jump_indices.end(),
                    static_cast<int>(i)) != curve.jump_indices.end())
        continue;
      double a = pts[i - 1].lambda.real();
      double b = pts[i].lambda.real();
      if (a > b) std::swap(a, b);
      a = std::max(a, lo);
      b = std::min(b, hi);
      if (a <= b) segments.push_back({a, b});
    }
  }
  std::sort(segments.begin(), segments.end());

  RealBands out;
  for (const auto& seg : segments) {
    if (!out.intervals.empty() &&
        seg.first <= out.intervals.back().second + merge_tol)
      out.intervals.back().second =
          std::max(out.intervals.back().second, seg.second);
    else
      out.intervals.push_back(seg);
  }
  double edge = lo;
  for (const auto& band : out.intervals) {
    if (band.first > edge) out.gaps.push_back({edge, band.first});
    edge = std::max(edge, band.second);
  }
  if (edge < hi) out.gaps.push_back({edge, hi});
  return out;
}

std::vector<Complex> band_union_points(const BandFamily& family,
                                       Complex corner_lo, Complex corner_hi) {
  std::vector<Complex> cloud;
  for (const BandCurve& curve : family.curves)
    for (const BandPoint& p : curve.points) {
      if (!p.matched) continue;
      if (p.lambda.real() < corner_lo.real() ||
          p.lambda.real() > corner_hi.real() ||
          p.lambda.imag() < corner_lo.imag() ||
          p.lambda.imag() > corner_hi.imag())
        continue;
      cloud.push_back(p.lambda);
    }
  return cloud;
}

std::vector<std::pair<int, double>> band_deviation_table(const BandFamily& family,
                                                         int j) {
  std::vector<std::pair<int, double>> out;
  for (const BandCurve& curve : family.curves) {
    if (curve.j != j) continue;
    double sup = 0.0;
    bool any = false;
    for (const BandPoint& p : curve.points)
      if (p.matched && !p.extrapolated && std::isfinite(p.deviation)) {
        sup = std::max(sup, p.deviation);
        any = true;
      }
    if (any) out.push_back({curve.k, sup});
  }
  return out;
}

}  // namespace qpsl
