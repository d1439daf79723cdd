#include "qpsl/regularity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

namespace qpsl {

namespace {

void check_args(int m, Complex s) {
  if (m < 1) throw std::invalid_argument("determinant order m must be >= 1");
  if (s == Complex(0, 0)) throw std::invalid_argument("determinant undefined at s = 0");
}

}  // namespace

Complex det_M_direct(int m, double t, Complex s) {
  check_args(m, s);
  const Complex eit = std::polar(1.0, t);
  const Complex i(0, 1);
  const Complex a = (eit - s) * i;
  const Complex b = (eit - 1.0 / s) * (-i);
  const Complex c = eit - s;
  const Complex e = eit - 1.0 / s;
  Matrix M = Matrix::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    M(k, k) = a;
    M(k, m + k) = b;
    M(m + k, k) = c;
    M(m + k, m + k) = e;
  }
  return M.determinant();
}

Complex det_M_closed(int m, double t, Complex s) {
  check_args(m, s);
  const Complex eit = std::polar(1.0, t);
  const Complex i(0, 1);
  const Complex base = -2.0 * i * eit * s + 2.0 * i + 2.0 * i * eit * eit -
                       2.0 * i * eit / s;
  return std::pow(base, m);
}

DeterminantEvaluation evaluate_determinant(int m, double t, Complex s) {
  DeterminantEvaluation out;
  out.m = m;
  out.t = t;
  out.s = s;
  out.direct = det_M_direct(m, t, s);
  out.closed = det_M_closed(m, t, s);
  return out;
}

std::pair<Complex, Complex> theta_coefficients(int m, double t) {
  if (m < 1) throw std::invalid_argument("determinant order m must be >= 1");
  const Complex i(0, 1);
  const Complex base = -2.0 * i * std::polar(1.0, t);
  const Complex theta_plus = std::pow(base, m);
  return {1.0 / theta_plus, theta_plus};
}

RegularityReport is_regular(int m, double t) {
  RegularityReport out;
  out.m = m;
  out.t = t;
  const auto [tm, tp] = theta_coefficients(m, t);
  out.theta_minus = tm;
  out.theta_plus = tp;
  out.regular = std::abs(tm) > 0.0 && std::abs(tp) > 0.0;
  out.roots_distinct = std::abs(std::sin(t)) > 1e-9;
  return out;
}

int root_multiplicity(int m, double t, Complex s0, double step,
                      double rel_threshold) {
  check_args(m, s0);
  if (step <= 0.0 || rel_threshold <= 0.0)
    throw std::invalid_argument("root_multiplicity needs positive step and threshold");
  // s^m det M is a polynomial of degree 2m, so the zero order is at most 2m.
  const int max_order = 2 * m;
  int samples = 8;
  while (samples < 4 * (max_order + 1)) samples *= 2;
  // coeff[k] estimates (k-th Taylor coefficient) * step^k, i.e. the size of
  // the order-k term at distance `step` from s0.
  std::vector<Complex> coeff(max_order + 1, Complex(0, 0));
  for (int g = 0; g < samples; ++g) {
    const double angle = 2.0 * kPi * g / samples;
    const Complex f = det_M_closed(m, t, s0 + step * std::polar(1.0, angle));
    for (int k = 0; k <= max_order; ++k)
      coeff[k] += f * std::polar(1.0, -angle * k);
  }
  double largest = 0.0;
  for (auto& c : coeff) {
    c /= static_cast<double>(samples);
    largest = std::max(largest, std::abs(c));
  }
  if (largest == 0.0) return -1;
  for (int k = 0; k <= max_order; ++k)
    if (std::abs(coeff[k]) > rel_threshold * largest) return k;
  return -1;
}

}  // namespace qpsl
