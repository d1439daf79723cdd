#pragma once

#include <utility>

#include "qpsl/types.hpp"

namespace qpsl {

// Both sides of the boundary-condition determinant identity at one (m, t, s).
struct DeterminantEvaluation {
  int m = 1;
  double t = 0.0;
  Complex s;
  Complex direct;
  Complex closed;
};

// Determinant of the assembled 2m x 2m matrix
//   [ (e^{it}-s) i I   (e^{it}-1/s)(-i) I ]
//   [ (e^{it}-s) I     (e^{it}-1/s) I     ]
// with I the m x m identity. Throws std::invalid_argument for s = 0.
Complex det_M_direct(int m, double t, Complex s);

// Scalar closed form (-2ie^{it}s + 2i + 2ie^{2it} - 2ie^{it}/s)^m.
Complex det_M_closed(int m, double t, Complex s);

DeterminantEvaluation evaluate_determinant(int m, double t, Complex s);

// Extreme Laurent coefficients (theta_{-m}, theta_m) of the determinant,
// theta_m = (-2ie^{it})^m and theta_{-m} its reciprocal; their product is 1.
std::pair<Complex, Complex> theta_coefficients(int m, double t);

struct RegularityReport {
  int m = 1;
  double t = 0.0;
  Complex theta_minus;
  Complex theta_plus;
  bool regular = false;
  // e^{it} != e^{-it}, i.e. t not a multiple of pi; the two m-fold root
  // families of the determinant are separated only in this case.
  bool roots_distinct = false;
};

RegularityReport is_regular(int m, double t);

// Order of the zero of the determinant at s0: Taylor coefficients are
// recovered from samples on a circle of radius `step` around s0 (a
// finite-difference derivative estimate that keeps the orders separated),
// and the first coefficient above rel_threshold times the largest one wins.
int root_multiplicity(int m, double t, Complex s0, double step = 1e-3,
                      double rel_threshold = 1e-4);

}  // namespace qpsl
