#include <doctest/doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "qpsl/bands.hpp"
#include "qpsl/errors.hpp"
#include "qpsl/potential.hpp"
#include "qpsl/types.hpp"

using qpsl::BandFamily;
using qpsl::BandPoint;
using qpsl::Complex;
using qpsl::PotentialSpec;
using qpsl::kPi;
using qpsl::kTwoPi;

namespace {

PotentialSpec shipped(const std::string& name) {
  return qpsl::load_potential(std::string(QPSL_DATA_DIR) + "/" + name);
}

PotentialSpec zero_potential() {
  return qpsl::make_potential(1, {{qpsl::TrigEntry{}}});
}

std::vector<int> range_k(int lo, int hi) {
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

BandPoint point_at(double t, Complex lambda, bool matched,
                   double deviation = 0.0) {
  BandPoint p;
  p.t = t;
  p.lambda = lambda;
  p.matched = matched;
  p.deviation = deviation;
  return p;
}

}  // namespace

TEST_CASE("the default quasimomentum grid avoids the degenerate angles") {
  const auto grid = qpsl::default_t_grid(8);
  REQUIRE(grid.size() == 16);
  const double h = kPi / 8;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) CHECK(grid[i] > grid[i - 1]);
    CHECK(grid[i] > 0.0);
    CHECK(grid[i] < kTwoPi);
    CHECK(std::abs(grid[i] - kPi) > h / 4);
  }
  CHECK(grid[0] == doctest::Approx(0.5 * h));
  CHECK(grid[7] == doctest::Approx(kPi - 0.5 * h));
  CHECK(grid[8] == doctest::Approx(kPi + 0.5 * h));
  CHECK(grid.back() == doctest::Approx(kTwoPi - 0.5 * h));

  CHECK_THROWS_AS(qpsl::default_t_grid(0), qpsl::ConfigError);
}

TEST_CASE("band curves thread the grid and close with extrapolated endpoints") {
  const PotentialSpec spec = shipped("mathieu.json");
  const auto grid = qpsl::default_t_grid(8);
  const auto family = qpsl::sweep(spec, grid, range_k(0, 2), 12);

  CHECK(family.K == 12);
  CHECK(family.m == 1);
  REQUIRE(family.curves.size() == 3);

  for (const auto& curve : family.curves) {
    if (curve.k == 0) {
      // the first gap opens at t = pi: the one-sided limits differ there,
      // and that seam step must be flagged so the union skips it
      CHECK_FALSE(curve.continuous);
      REQUIRE(curve.jump_indices.size() == 1);
      const auto& seam = curve.points[curve.jump_indices[0]];
      CHECK(seam.t == kPi);
      CHECK(seam.extrapolated);
    } else {
      CHECK(curve.continuous);
      CHECK(curve.jump_indices.empty());
    }
    // 8 computed points per half plus both extrapolated endpoints
    REQUIRE(curve.points.size() == 20);

    int at_zero = 0, at_pi = 0, at_two_pi = 0;
    for (size_t i = 0; i < curve.points.size(); ++i) {
      const auto& p = curve.points[i];
      CHECK(p.matched);
      if (i > 0) CHECK(p.t >= curve.points[i - 1].t);
      if (p.extrapolated) {
        if (p.t == 0.0) ++at_zero;
        if (p.t == kPi) ++at_pi;
        if (p.t == kTwoPi) ++at_two_pi;
        CHECK_FALSE(std::isfinite(p.deviation));
      } else {
        CHECK(std::isfinite(p.deviation));
        CHECK(p.deviation < 2.0);
        const double w = kTwoPi * curve.k + p.t;
        CHECK(std::abs(p.lambda - Complex(w * w, 0.0)) ==
              doctest::Approx(p.deviation));
      }
    }
    CHECK(at_zero == 1);
    CHECK(at_pi == 2);  // one-sided limits from both halves
    CHECK(at_two_pi == 1);
  }

  // deviations shrink with |k|
  const auto table = qpsl::band_deviation_table(family, 0);
  REQUIRE(table.size() == 3);
  CHECK(table[0].first == 0);
  CHECK(table[2].first == 2);
  CHECK(table[2].second < table[0].second);
}

TEST_CASE("sweep validates its grid and surfaces worker failures") {
  const PotentialSpec spec = zero_potential();
  CHECK_THROWS_AS(qpsl::sweep(spec, {}, {0}, 6), qpsl::ConfigError);
  CHECK_THROWS_AS(qpsl::sweep(spec, {1.0, 0.5}, {0}, 6), qpsl::ConfigError);
  // a grid point at the degenerate angle fails inside the sweep
  CHECK_THROWS_AS(qpsl::sweep(spec, {1.0, kPi}, {0}, 6), qpsl::SolverError);
}

TEST_CASE("free bands tile the positive axis without gaps") {
  const PotentialSpec spec = zero_potential();
  const auto family =
      qpsl::sweep(spec, qpsl::default_t_grid(16), range_k(-3, 3), 8);
  const auto bands = qpsl::band_union_real(family, 0.1, 100.0);
  CHECK(bands.gaps.empty());
  REQUIRE(bands.intervals.size() == 1);
  CHECK(bands.intervals[0].first == doctest::Approx(0.1));
  CHECK(bands.intervals[0].second == doctest::Approx(100.0));
}

TEST_CASE("the cosine potential opens a spectral gap near the band edge") {
  const PotentialSpec spec = shipped("mathieu.json");
  const auto family =
      qpsl::sweep(spec, qpsl::default_t_grid(32), range_k(-2, 2), 10);
  const auto bands = qpsl::band_union_real(family, 0.1, 40.0);

  REQUIRE(!bands.gaps.empty());
  const auto& first = bands.gaps.front();
  CHECK(first.first > 8.5);
  CHECK(first.first < 9.5);
  CHECK(first.second > 10.2);
  CHECK(first.second < 11.2);

  for (size_t i = 0; i < bands.intervals.size(); ++i) {
    CHECK(bands.intervals[i].first >= 0.1);
    CHECK(bands.intervals[i].second <= 40.0);
    if (i > 0)
      CHECK(bands.intervals[i].first > bands.intervals[i - 1].second);
  }
}

TEST_CASE("the point cloud keeps only matched points inside the rectangle") {
  BandFamily family;
  qpsl::BandCurve curve;
  curve.points.push_back(point_at(0.5, Complex(1.0, 1.0), true));
  curve.points.push_back(point_at(1.0, Complex(5.0, 0.1), true));
  curve.points.push_back(point_at(1.5, Complex(3.0, -2.0), false));
  curve.points.push_back(point_at(2.0, Complex(100.0, 0.0), true));
  family.curves.push_back(curve);

  const auto cloud = qpsl::band_union_points(family, Complex(0.0, -1.0),
                                             Complex(10.0, 2.0));
  REQUIRE(cloud.size() == 2);
  CHECK(cloud[0] == Complex(1.0, 1.0));
  CHECK(cloud[1] == Complex(5.0, 0.1));
}

TEST_CASE("deviation rows take the per-curve supremum over computed points") {
  BandFamily family;
  qpsl::BandCurve a;
  a.k = 3;
  a.j = 0;
  a.points.push_back(point_at(0.5, Complex(1.0, 0.0), true, 0.5));
  BandPoint endpoint = point_at(0.0, Complex(1.0, 0.0), true,
                                std::numeric_limits<double>::quiet_NaN());
  endpoint.extrapolated = true;
  a.points.push_back(endpoint);
  a.points.push_back(point_at(1.0, Complex(1.0, 0.0), true, 0.2));
  family.curves.push_back(a);

  qpsl::BandCurve other_branch = a;
  other_branch.k = 4;
  other_branch.j = 1;
  family.curves.push_back(other_branch);

  qpsl::BandCurve unmatched;
  unmatched.k = 5;
  unmatched.j = 0;
  unmatched.points.push_back(point_at(0.5, Complex(0.0, 0.0), false));
  family.curves.push_back(unmatched);

  const auto rows = qpsl::band_deviation_table(family, 0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].first == 3);
  CHECK(rows[0].second == doctest::Approx(0.5));
}

TEST_CASE("sweeps are bitwise deterministic across worker counts") {
  const PotentialSpec spec = shipped("mathieu.json");
  const auto grid = qpsl::default_t_grid(6);
  const auto ks = range_k(-2, 2);

  const char* saved = std::getenv("QPSL_WORKERS");
  const std::string backup = saved ? saved : "";

  setenv("QPSL_WORKERS", "1", 1);
  const auto serial = qpsl::sweep(spec, grid, ks, 8);
  setenv("QPSL_WORKERS", "2", 1);
  const auto threaded = qpsl::sweep(spec, grid, ks, 8);

  if (saved)
    setenv("QPSL_WORKERS", backup.c_str(), 1);
  else
    unsetenv("QPSL_WORKERS");

  REQUIRE(serial.curves.size() == threaded.curves.size());
  for (size_t c = 0; c < serial.curves.size(); ++c) {
    const auto& lhs = serial.curves[c];
    const auto& rhs = threaded.curves[c];
    REQUIRE(lhs.points.size() == rhs.points.size());
    for (size_t i = 0; i < lhs.points.size(); ++i) {
      CHECK(lhs.points[i].lambda.real() == rhs.points[i].lambda.real());
      CHECK(lhs.points[i].lambda.imag() == rhs.points[i].lambda.imag());
      CHECK(lhs.points[i].matched == rhs.points[i].matched);
    }
  }
}
