#pragma once

#include <utility>
#include <vector>

#include "qpsl/galerkin.hpp"
#include "qpsl/potential.hpp"
#include "qpsl/types.hpp"

namespace qpsl {

struct BandPoint {
  double t = 0.0;
  Complex lambda;
  bool matched = false;
  bool extrapolated = false;  // endpoint at t in {0, pi, 2pi}, not computed
  double deviation = 0.0;     // |lambda - (2pi k+t)^2 - mu_j| when matched
};

struct BandCurve {
  int k = 0;
  int j = 0;
  std::vector<BandPoint> points;  // along the grid, endpoints interleaved
  bool continuous = true;
  std::vector<int> jump_indices;  // positions whose step tripped the flag
};

struct BandFamily {
  std::vector<double> t_grid;
  int K = 0;
  int m = 0;
  std::vector<BandCurve> curves;
};

// 2 * points_per_half quasimomenta, uniform over each of (0, pi) and
// (pi, 2pi), shifted half a step off the excluded endpoints.
std::vector<double> default_t_grid(int points_per_half = 64);

// Solves and pairs at every grid point; curves are threaded by the (k, j)
// disk labels and closed with linearly extrapolated endpoint values at
// t = 0, pi, 2pi (two one-sided values at pi). rho < 0 picks the default
// disk-radius scale for the potential. Workers: QPSL_WORKERS env var, else
// the hardware count.
BandFamily sweep(const PotentialSpec& spec, const std::vector<double>& t_grid,
                 const std::vector<int>& k_range, int K, double rho = -1.0);

struct RealBands {
  std::vector<std::pair<double, double>> intervals;  // merged coverage
  std::vector<std::pair<double, double>> gaps;       // complement in window
};

// Real-axis coverage for (numerically) real curves: consecutive matched
// points contribute the whole segment between them (the curves are
// continuous in t), segments are merged with merge_tol and clipped to
// [lo, hi]. Points with |Im| > imag_tol * (1 + |lambda|) are dropped.
RealBands band_union_real(const BandFamily& family, double lo, double hi,
                          double merge_tol = 1e-6, double imag_tol = 1e-6);

// General case: matched curve points inside the axis-aligned rectangle
// spanned by corner_lo, corner_hi.
std::vector<Complex> band_union_points(const BandFamily& family,
                                       Complex corner_lo, Complex corner_hi);

// sup over the grid of |lambda_{k,j}(t) - (2pi k+t)^2 - mu_j| per curve,
// pooled as (k, sup) rows ready for decay fitting.
std::vector<std::pair<int, double>> band_deviation_table(const BandFamily& family,
                                                         int j);

}  // namespace qpsl
