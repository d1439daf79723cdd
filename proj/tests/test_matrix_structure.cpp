#include <doctest/doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qpsl/errors.hpp"
#include "qpsl/matrix_structure.hpp"
#include "qpsl/types.hpp"

using qpsl::Complex;
using qpsl::EigenStructure;
using qpsl::Matrix;
using qpsl::Vector;

namespace {

Matrix random_unitary(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5; };
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = Complex(u(), u());
  return Eigen::HouseholderQR<Matrix>(A).householderQ();
}

double chain_residual(const Matrix& C, const qpsl::DistinctEigenvalue& d) {
  double worst = 0.0;
  for (const auto& chain : d.chains) {
    Vector prev = Vector::Zero(C.rows());
    for (int depth = 0; depth < chain.length(); ++depth) {
      const Vector& u = chain.at(depth);
      worst = std::max(worst, ((C - d.mu * Matrix::Identity(C.rows(), C.rows())) * u -
                               prev)
                                  .norm());
      prev = u;
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("diagonal matrix: simple eigenvalues, unit chains, hand gaps") {
  Matrix C = Matrix::Zero(3, 3);
  C(0, 0) = 1.0;
  C(1, 1) = Complex(2.0, 1.0);
  C(2, 2) = 5.0;
  const EigenStructure s = qpsl::analyze_matrix(C);

  REQUIRE(s.distinct_count() == 3);
  CHECK(std::abs(s.distinct[0].mu - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(s.distinct[1].mu - Complex(2.0, 1.0)) < 1e-14);
  CHECK(std::abs(s.distinct[2].mu - Complex(5.0, 0.0)) < 1e-14);
  for (const auto& d : s.distinct) {
    CHECK(d.multiplicity == 1);
    CHECK(d.max_chain_length == 1);
  }
  // a_0 = |1-(2+i)| = sqrt(2), a_1 = sqrt(2), a_2 = |5-(2+i)| = sqrt(10)
  CHECK(s.gaps[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.gaps[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.gaps[2] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK(qpsl::spectral_gap(s, 2) == doctest::Approx(std::sqrt(10.0)));
  CHECK(chain_residual(C, s.distinct[0]) < 1e-13);
}

TEST_CASE("2x2 nilpotent block yields one chain of length two") {
  Matrix C = Matrix::Zero(2, 2);
  C(0, 1) = 1.0;
  const EigenStructure s = qpsl::analyze_matrix(C);

  REQUIRE(s.distinct_count() == 1);
  CHECK(std::abs(s.distinct[0].mu) < 1e-12);
  CHECK(s.distinct[0].multiplicity == 2);
  CHECK(s.distinct[0].max_chain_length == 2);
  REQUIRE(s.distinct[0].chains.size() == 1);
  CHECK(s.distinct[0].chains[0].length() == 2);
  CHECK(chain_residual(C, s.distinct[0]) < 1e-12);
  CHECK(s.gaps[0] > 1e100);  // single distinct eigenvalue: infinite gap
  CHECK(static_cast<int>(s.flat.size()) == 2);
}

TEST_CASE("jordan block plus separate eigenvalue splits correctly") {
  Matrix C = Matrix::Zero(3, 3);
  C(0, 0) = 1.0;
  C(0, 1) = 1.0;
  C(1, 1) = 1.0;
  C(2, 2) = 2.0;
  const EigenStructure s = qpsl::analyze_matrix(C);

  REQUIRE(s.distinct_count() == 2);
  CHECK(s.distinct[0].multiplicity == 2);
  CHECK(s.distinct[0].max_chain_length == 2);
  CHECK(s.distinct[1].multiplicity == 1);
  CHECK(s.gaps[0] == doctest::Approx(1.0));
  CHECK(chain_residual(C, s.distinct[0]) < 1e-12);
}

TEST_CASE("weyr staircase: J2 + J1 at the same eigenvalue gives two chains") {
  // diag(J2(0), J1(0)) has kernel dimension 2 and (C^2) kernel dimension 3
  Matrix C = Matrix::Zero(3, 3);
  C(0, 1) = 1.0;
  const EigenStructure s = qpsl::analyze_matrix(C);
  (void)s;

  Matrix D = Matrix::Zero(3, 3);
  D(0, 1) = 1.0;  // J2 block on {0,1}, J1 block on {2}
  const EigenStructure t = qpsl::analyze_matrix(D);
  REQUIRE(t.distinct_count() == 1);
  CHECK(t.distinct[0].multiplicity == 3);
  CHECK(t.distinct[0].max_chain_length == 2);
  REQUIRE(t.distinct[0].chains.size() == 2);
  // chains come longest-first
  CHECK(t.distinct[0].chains[0].length() == 2);
  CHECK(t.distinct[0].chains[1].length() == 1);
  CHECK(chain_residual(D, t.distinct[0]) < 1e-12);
}

TEST_CASE("unitary similarity preserves the whole invariant structure") {
  Matrix J = Matrix::Zero(4, 4);
  J(0, 0) = Complex(1.0, -0.5);
  J(0, 1) = 1.0;
  J(1, 1) = Complex(1.0, -0.5);
  J(2, 2) = Complex(1.0, -0.5);
  J(3, 3) = -2.0;
  for (unsigned seed : {3u, 17u, 29u}) {
    const Matrix U = random_unitary(4, seed);
    const Matrix C = U * J * U.adjoint();
    const EigenStructure s = qpsl::analyze_matrix(C);
    REQUIRE(s.distinct_count() == 2);
    CHECK(std::abs(s.distinct[1].mu - Complex(1.0, -0.5)) < 1e-10);
    CHECK(s.distinct[1].multiplicity == 3);
    CHECK(s.distinct[1].max_chain_length == 2);
    CHECK(s.distinct[1].chains.size() == 2);
    CHECK(s.distinct[0].multiplicity == 1);
    CHECK(chain_residual(C, s.distinct[1]) < 1e-9);
    CHECK(s.gaps[0] == doctest::Approx(std::abs(Complex(3.0, -0.5))));
  }
}

TEST_CASE("eigenvalues separated near the tolerance raise an ambiguity") {
  Matrix C = Matrix::Zero(3, 3);
  C(0, 0) = 1.0;
  C(1, 1) = 1.0 + 3e-8;  // beyond one default tolerance, inside ten
  C(2, 2) = 2.0;
  CHECK_THROWS_AS(qpsl::analyze_matrix(C), qpsl::ClusterAmbiguityError);
  // an explicit coarser tolerance resolves the same matrix as a double point
  const EigenStructure s = qpsl::analyze_matrix(C, 1e-6);
  CHECK(s.distinct_count() == 2);
  CHECK(s.distinct[0].multiplicity == 2);
}

TEST_CASE("hermitian input produces orthonormal eigenvectors and unit chains") {
  Matrix C(3, 3);
  C << 2.0, Complex(0.3, 0.4), 0.0,
       Complex(0.3, -0.4), 1.0, Complex(0.0, -0.2),
       0.0, Complex(0.0, 0.2), -1.0;
  C = (C + Matrix(C.adjoint())).eval() * 0.5;
  const EigenStructure s = qpsl::analyze_matrix(C);
  REQUIRE(s.distinct_count() == 3);
  for (const auto& d : s.distinct) {
    CHECK(d.max_chain_length == 1);
    CHECK(std::abs(d.mu.imag()) < 1e-12);
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      CHECK(std::abs(qpsl::inner(s.flat[a].vector, s.flat[b].vector)) < 1e-10);
    }
  }
}

TEST_CASE("adjoint structure aligns labels and normalizes the pairing") {
  Matrix C(3, 3);
  C << Complex(1.0, 0.2), 0.4, Complex(0.0, -0.3),
       0.0, Complex(2.0, -0.5), 0.7,
       0.1, 0.0, 4.0;
  const EigenStructure primal = qpsl::analyze_matrix(C);
  const EigenStructure star = qpsl::adjoint_structure(primal, C);

  REQUIRE(star.distinct_count() == primal.distinct_count());
  for (int j = 0; j < primal.distinct_count(); ++j) {
    CHECK(std::abs(star.distinct[j].mu - std::conj(primal.distinct[j].mu)) <
          1e-10);
    // C^H v* = conj(mu) v*
    const Vector& vstar = star.distinct[j].chains[0].eigenvector;
    CHECK((C.adjoint() * vstar - star.distinct[j].mu * vstar).norm() < 1e-10);
    // simple eigenvalues: <v, v*> = 1 after rescaling
    const Vector& v = primal.distinct[j].chains[0].eigenvector;
    CHECK(std::abs(qpsl::inner(v, vstar) - 1.0) < 1e-10);
  }
}

TEST_CASE("adjoint view swaps the roles and keeps indices aligned") {
  Matrix C(2, 2);
  C << Complex(1.0, 0.3), 0.5,
       0.0, Complex(3.0, -0.2);
  const qpsl::MeanMatrixAnalysis mean = qpsl::analyze_mean_matrix(C);
  const qpsl::MeanMatrixAnalysis seen = qpsl::adjoint_view(mean);
  CHECK((seen.C - Matrix(C.adjoint())).norm() == 0.0);
  for (int j = 0; j < mean.primal.distinct_count(); ++j) {
    CHECK(std::abs(seen.primal.distinct[j].mu -
                   std::conj(mean.primal.distinct[j].mu)) < 1e-12);
    CHECK(std::abs(seen.adjoint.distinct[j].mu - mean.primal.distinct[j].mu) <
          1e-12);
  }
}
