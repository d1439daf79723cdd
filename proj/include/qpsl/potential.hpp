#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qpsl/types.hpp"

namespace qpsl {

// One scalar entry b_{i,j}(x) = sum_nu coeff * e^{2 pi i nu x} of the matrix
// potential, stored as its finite harmonic support. Harmonics are kept sorted
// by nu with no duplicates; coefficients below the drop tolerance are removed.
struct TrigEntry {
  std::vector<std::pair<int, Complex>> harmonics;

  Complex coefficient(int nu) const;
  Complex evaluate(double x) const;
};

// An m x m matrix potential Q(x) given entrywise as trigonometric polynomials.
// Fourier convention: Qhat(nu)[s][q] = b_{s,q,nu} = integral_0^1 b_{s,q}(x)
// e^{-2 pi i nu x} dx, so Qhat(nu) is the coefficient of e^{2 pi i nu x}.
struct PotentialSpec {
  int m = 0;
  std::vector<std::vector<TrigEntry>> entries;  // exactly m x m
  int max_harmonic = 0;                         // V: largest |nu| present

  const TrigEntry& entry(int i, int j) const { return entries[i][j]; }
};

struct FourierBlock {
  int nu = 0;
  Matrix block;  // m x m
};

inline constexpr double kDefaultDropTol = 1e-14;

// Validates dimensions, sorts/merges harmonics, drops negligible coefficients
// and computes V. All construction paths funnel through here.
PotentialSpec make_potential(int m, std::vector<std::vector<TrigEntry>> entries,
                             double drop_tol = kDefaultDropTol);

// Reads the JSON potential format: {"m": int, "entries": [[ [{nu,re,im},...],
// ...], ...]}. Missing/null entry lists mean zero entries.
PotentialSpec load_potential(const std::string& path,
                             double drop_tol = kDefaultDropTol);

PotentialSpec parse_potential(const std::string& json_text,
                              double drop_tol = kDefaultDropTol);

// Exact coefficient extraction; zero matrix when |nu| > V.
FourierBlock fourier_block(const PotentialSpec& spec, int nu);

// C = Qhat(0) = integral of Q over one period.
Matrix mean_matrix(const PotentialSpec& spec);

// Entrywise DFT of uniform samples Q(g/G), g = 0..G-1, truncated to |nu| <= V.
// Exact for trig polynomials of degree <= V once G >= 2V+1.
PotentialSpec sample_to_spec(const std::vector<Matrix>& samples, int V,
                             double drop_tol = kDefaultDropTol);

// Pointwise value of the stored finite series.
Matrix evaluate_potential(const PotentialSpec& spec, double x);

// Spec of Q*(x) = Q(x)^H, the potential of the adjoint operator:
// Qhat*(nu) = Qhat(-nu)^H.
PotentialSpec adjoint_spec(const PotentialSpec& spec);

// True when Q(x) is Hermitian-valued, i.e. Qhat(-nu) = Qhat(nu)^H for all nu.
bool is_hermitian(const PotentialSpec& spec, double tol = 1e-12);

// sum_{nu != 0} ||Qhat(nu)||_F, the Fourier-l1 size of the perturbation Q - C.
double perturbation_l1_norm(const PotentialSpec& spec);

}  // namespace qpsl
