#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qpsl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Inner product <u, v> of C^m vectors, linear in u and conjugate-linear in v.
// Matches the convention (f, g) = integral <f(x), g(x)> dx used throughout.
inline Complex inner(const Vector& u, const Vector& v) { return v.dot(u); }

}  // namespace qpsl
