#include <doctest/doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qpsl/errors.hpp"
#include "qpsl/potential.hpp"

using qpsl::Complex;
using qpsl::Matrix;
using qpsl::PotentialSpec;
using qpsl::TrigEntry;

namespace {

// 2x2 potential used across the cases below:
//   b_00 = 1 + 2 e^{2pi i x},  b_01 = (0.5 - 0.25i) e^{-2pi i x}
//   b_10 = 3i e^{4pi i x},     b_11 = -2
PotentialSpec sample_spec() {
  std::vector<std::vector<TrigEntry>> entries(2, std::vector<TrigEntry>(2));
  entries[0][0].harmonics = {{0, {1.0, 0.0}}, {1, {2.0, 0.0}}};
  entries[0][1].harmonics = {{-1, {0.5, -0.25}}};
  entries[1][0].harmonics = {{2, {0.0, 3.0}}};
  entries[1][1].harmonics = {{0, {-2.0, 0.0}}};
  return make_potential(2, std::move(entries));
}

}  // namespace

TEST_CASE("fourier blocks return the stored harmonics entrywise") {
  const PotentialSpec spec = sample_spec();
  CHECK(spec.max_harmonic == 2);

  const Matrix q0 = fourier_block(spec, 0).block;
  CHECK(q0(0, 0) == Complex(1.0, 0.0));
  CHECK(q0(1, 1) == Complex(-2.0, 0.0));
  CHECK(q0(0, 1) == Complex(0.0, 0.0));

  const Matrix q1 = fourier_block(spec, 1).block;
  CHECK(q1(0, 0) == Complex(2.0, 0.0));
  const Matrix qm1 = fourier_block(spec, -1).block;
  CHECK(qm1(0, 1) == Complex(0.5, -0.25));
  const Matrix q2 = fourier_block(spec, 2).block;
  CHECK(q2(1, 0) == Complex(0.0, 3.0));

  // outside the bandwidth everything vanishes
  CHECK(fourier_block(spec, 3).block.norm() == 0.0);
  CHECK(fourier_block(spec, -7).block.norm() == 0.0);
}

TEST_CASE("mean matrix equals the zeroth Fourier block") {
  const PotentialSpec spec = sample_spec();
  const Matrix C = mean_matrix(spec);
  CHECK((C - fourier_block(spec, 0).block).norm() == 0.0);
}

TEST_CASE("pointwise evaluation matches the explicit trigonometric series") {
  const PotentialSpec spec = sample_spec();
  for (double x : {0.0, 0.17, 0.5, 0.83}) {
    const Matrix Q = evaluate_potential(spec, x);
    const Complex e1 = std::exp(Complex(0.0, qpsl::kTwoPi * x));
    CHECK(std::abs(Q(0, 0) - (1.0 + 2.0 * e1)) < 1e-14);
    CHECK(std::abs(Q(0, 1) - Complex(0.5, -0.25) / e1) < 1e-14);
    CHECK(std::abs(Q(1, 0) - Complex(0.0, 3.0) * e1 * e1) < 1e-14);
    CHECK(std::abs(Q(1, 1) - Complex(-2.0, 0.0)) < 1e-14);
  }
}

TEST_CASE("JSON round trip reproduces the coefficients") {
  const char* text = R"({
    "m": 2,
    "entries": [
      [[{"nu": 0, "re": 1.0}, {"nu": 1, "re": 2.0}],
       [{"nu": -1, "re": 0.5, "im": -0.25}]],
      [[{"nu": 2, "im": 3.0}], [{"nu": 0, "re": -2.0}]]
    ]
  })";
  const PotentialSpec parsed = qpsl::parse_potential(text);
  const PotentialSpec direct = sample_spec();
  CHECK(parsed.m == direct.m);
  CHECK(parsed.max_harmonic == direct.max_harmonic);
  for (int nu = -2; nu <= 2; ++nu) {
    CHECK((fourier_block(parsed, nu).block - fourier_block(direct, nu).block)
              .norm() == 0.0);
  }
}

TEST_CASE("null entries parse as zero and missing file reports its path") {
  const PotentialSpec zero = qpsl::parse_potential(R"({"m":1,"entries":[[null]]})");
  CHECK(zero.max_harmonic == 0);
  CHECK(mean_matrix(zero).norm() == 0.0);

  CHECK_THROWS_AS(qpsl::load_potential("/nonexistent/q.json"), qpsl::ParseError);
  CHECK_THROWS_AS(qpsl::parse_potential("{not json"), qpsl::ParseError);
  CHECK_THROWS_AS(qpsl::parse_potential(R"({"entries":[]})"), qpsl::ParseError);
}

TEST_CASE("construction validates the entry grid shape") {
  std::vector<std::vector<TrigEntry>> ragged(2);
  ragged[0].resize(2);
  ragged[1].resize(1);
  CHECK_THROWS_AS(qpsl::make_potential(2, std::move(ragged)),
                  qpsl::DimensionError);
  CHECK_THROWS_AS(qpsl::make_potential(0, {}), qpsl::DimensionError);
}

TEST_CASE("duplicate harmonics merge and negligible ones are dropped") {
  std::vector<std::vector<TrigEntry>> entries(1, std::vector<TrigEntry>(1));
  entries[0][0].harmonics = {{1, {0.5, 0.0}},
                             {1, {0.25, 0.0}},
                             {3, {1e-16, 0.0}}};
  const PotentialSpec spec = qpsl::make_potential(1, std::move(entries));
  CHECK(spec.max_harmonic == 1);  // the 1e-16 harmonic at nu=3 is gone
  CHECK(fourier_block(spec, 1).block(0, 0) == Complex(0.75, 0.0));
}

TEST_CASE("sampling recovers a trigonometric polynomial exactly") {
  const PotentialSpec spec = sample_spec();
  const int V = spec.max_harmonic;
  const int G = 2 * V + 1;
  std::vector<Matrix> samples;
  for (int g = 0; g < G; ++g) {
    samples.push_back(evaluate_potential(spec, static_cast<double>(g) / G));
  }
  const PotentialSpec back = qpsl::sample_to_spec(samples, V);
  for (int nu = -V; nu <= V; ++nu) {
    CHECK((fourier_block(back, nu).block - fourier_block(spec, nu).block)
              .norm() < 1e-13);
  }
}

TEST_CASE("sampling grid below the Nyquist count is rejected") {
  std::vector<Matrix> samples(4, Matrix::Zero(1, 1));
  CHECK_THROWS_AS(qpsl::sample_to_spec(samples, 2), qpsl::GridError);
}

TEST_CASE("adjoint potential conjugate-transposes and mirrors the harmonics") {
  const PotentialSpec spec = sample_spec();
  const PotentialSpec star = qpsl::adjoint_spec(spec);
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu) {
    const Matrix lhs = fourier_block(star, nu).block;
    const Matrix rhs = fourier_block(spec, -nu).block.adjoint();
    CHECK((lhs - rhs).norm() < 1e-15);
  }
  // taking the adjoint twice gives the original back
  const PotentialSpec twice = qpsl::adjoint_spec(star);
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu) {
    CHECK((fourier_block(twice, nu).block - fourier_block(spec, nu).block)
              .norm() == 0.0);
  }
}

TEST_CASE("hermitian detection distinguishes the shipped potentials") {
  const PotentialSpec hermitian =
      qpsl::load_potential(std::string(QPSL_DATA_DIR) + "/hermitian_m2.json");
  CHECK(qpsl::is_hermitian(hermitian));
  const PotentialSpec general =
      qpsl::load_potential(std::string(QPSL_DATA_DIR) + "/m2_nonhermitian.json");
  CHECK_FALSE(qpsl::is_hermitian(general));
  CHECK_FALSE(qpsl::is_hermitian(qpsl::adjoint_spec(general)));

  // a potential equal to its own adjoint spec is Hermitian-valued
  CHECK(qpsl::is_hermitian(
      qpsl::load_potential(std::string(QPSL_DATA_DIR) + "/mathieu.json")));
}

TEST_CASE("perturbation size sums the Frobenius norms of the side blocks") {
  const PotentialSpec spec = sample_spec();
  double expected = 0.0;
  for (int nu = -2; nu <= 2; ++nu) {
    if (nu != 0) expected += fourier_block(spec, nu).block.norm();
  }
  CHECK(qpsl::perturbation_l1_norm(spec) == doctest::Approx(expected));
  // hand value: ||Q1|| = 2, ||Q-1|| = sqrt(0.5^2 + 0.25^2), ||Q2|| = 3
  CHECK(expected ==
        doctest::Approx(2.0 + std::sqrt(0.3125) + 3.0).epsilon(1e-14));
}
