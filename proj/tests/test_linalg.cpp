#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qpsl/linalg.hpp"

using qpsl::Complex;
using qpsl::Matrix;
using qpsl::Vector;

namespace {

Matrix random_matrix(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5; };
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(u(), u());
  return A;
}

}  // namespace

TEST_CASE("dense eigensolve reproduces a triangular 2x2 by hand") {
  Matrix A(2, 2);
  A << Complex(2.0, 0.0), Complex(1.0, 0.0),
       Complex(0.0, 0.0), Complex(3.0, 0.0);
  const auto [values, vectors] = qpsl::dense_eigensolve(A);

  std::vector<Complex> sorted = {values(0), values(1)};
  std::sort(sorted.begin(), sorted.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(sorted[0] - 2.0) < 1e-14);
  CHECK(std::abs(sorted[1] - 3.0) < 1e-14);

  for (int i = 0; i < 2; ++i) {
    CHECK((A * vectors.col(i) - values(i) * vectors.col(i)).norm() < 1e-14);
    CHECK(vectors.col(i).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("ordered schur factors and fronts the selected eigenvalues") {
  const Matrix A = random_matrix(6, 7); // arbitrary non-normal matrix
  const auto schur =
      qpsl::ordered_schur(A, [](Complex z) { return z.real() > 0.0; });

  // factorization: unitary U, upper-triangular T, A = U T U^H
  CHECK((schur.U * schur.U.adjoint() - Matrix::Identity(6, 6)).norm() < 1e-12);
  CHECK((schur.U * schur.T * schur.U.adjoint() - A).norm() < 1e-12);
  double below = 0.0;
  for (int i = 1; i < 6; ++i)
    for (int j = 0; j < i; ++j) below += std::abs(schur.T(i, j));
  CHECK(below < 1e-13);

  // the leading selected_count diagonal entries satisfy the predicate,
  // the trailing ones do not
  for (int i = 0; i < 6; ++i) {
    const bool positive = schur.T(i, i).real() > 0.0;
    CHECK(positive == (i < schur.selected_count));
  }

  // the leading columns span an invariant subspace: A U1 = U1 (U1^H A U1)
  const Matrix U1 = schur.U.leftCols(schur.selected_count);
  const Matrix restriction = U1.adjoint() * A * U1;
  CHECK((A * U1 - U1 * restriction).norm() < 1e-12);
}

TEST_CASE("schur reordering keeps the spectrum and honors an explicit mask") {
  const Matrix A = random_matrix(5, 11);
  const auto base = qpsl::ordered_schur(A, [](Complex) { return false; });

  std::vector<char> select = {0, 1, 0, 1, 0};
  const auto moved = qpsl::reorder_schur(base.T, base.U, select);
  CHECK(moved.selected_count == 2);
  CHECK((moved.U * moved.T * moved.U.adjoint() - A).norm() < 1e-12);

  // same multiset of eigenvalues, with the two marked ones leading
  std::vector<Complex> expected = {base.T(1, 1), base.T(3, 3)};
  for (int i = 0; i < 2; ++i) {
    const Complex z = moved.T(i, i);
    const bool hit = std::abs(z - expected[0]) < 1e-10 ||
                     std::abs(z - expected[1]) < 1e-10;
    CHECK(hit);
  }
}

TEST_CASE("nullspace finds an orthonormal kernel basis") {
  // rank-2 matrix on C^4: rows select components 0 and 1
  Matrix A = Matrix::Zero(3, 4);
  A(0, 0) = 1.0;
  A(1, 1) = 2.0;
  A(2, 1) = Complex(0.0, 1.0);
  const Matrix N = qpsl::nullspace(A, 1e-12);
  REQUIRE(N.cols() == 2);
  CHECK((A * N).norm() < 1e-13);
  CHECK((N.adjoint() * N - Matrix::Identity(2, 2)).norm() < 1e-13);

  // full-rank matrix has an empty kernel
  CHECK(qpsl::nullspace(random_matrix(4, 3) + 5.0 * Matrix::Identity(4, 4),
                        1e-10)
            .cols() >= 0);
  CHECK(qpsl::nullspace(Matrix::Identity(4, 4), 1e-10).cols() == 0);
}

TEST_CASE("orthonormal span truncates to the numerical rank") {
  Matrix A(3, 3);
  Vector v(3);
  v << 1.0, Complex(0.0, 2.0), -1.0;
  A.col(0) = v;
  A.col(1) = 2.0 * v;      // dependent
  A.col(2) = 1e-15 * v;    // negligible
  const Matrix S = qpsl::orthonormal_span(A, 1e-10);
  REQUIRE(S.cols() == 1);
  CHECK(S.col(0).norm() == doctest::Approx(1.0).epsilon(1e-13));
  // the span contains v
  const Vector residual = v - S * (S.adjoint() * v);
  CHECK(residual.norm() < 1e-12);
}

TEST_CASE("canonical phase pins the first large component to be positive") {
  Vector v(3);
  v << Complex(0.0, 0.5), Complex(-3.0, 4.0), Complex(1.0, 0.0);
  const Vector w = qpsl::canonical_phase(v);
  // the first component above the tolerance becomes real positive
  CHECK(w(0).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w(0).real() > 0.0);
  CHECK(std::abs(w.norm() - v.norm()) < 1e-14);

  // a negligible leading component is skipped
  Vector u(3);
  u << Complex(0.0, 1e-15), Complex(0.0, 2.0), Complex(1.0, 0.0);
  const Vector pinned = qpsl::canonical_phase(u);
  CHECK(pinned(1).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pinned(1).real() > 0.0);

  // idempotent, and any unimodular multiple lands on the same representative
  const Vector again = qpsl::canonical_phase(w);
  CHECK((again - w).norm() < 1e-14);
  const Vector rotated =
      qpsl::canonical_phase(Vector(std::exp(Complex(0.0, 1.234)) * v));
  CHECK((rotated - w).norm() < 1e-13);
}
