#pragma once

#include <vector>

#include "qpsl/potential.hpp"
#include "qpsl/types.hpp"

namespace qpsl {

// Quasimomenta closer than this to {0, pi, 2pi} are rejected: the two root
// families e^{it}, e^{-it} of the boundary determinant collide there.
inline constexpr double kAngleTol = 1e-6;
inline constexpr int kMaxGalerkinDim = 4000;

// Cutoff that keeps truncation error out of the studied indices |k| <= k_max
// for a potential of bandwidth V.
inline int default_cutoff(int k_max, int V) { return 2 * k_max + 4 * V + 8; }

// Dense truncation of -y'' + Q y in the basis phi_{n,s}(x) = e_s e^{i(2pi n+t)x}
// for |n| <= K: block form A[n][p] = (2pi n + t)^2 delta_{np} I + Qhat(n - p).
struct TruncatedOperator {
  double t = 0.0;
  int K = 0;
  int m = 0;
  int V = 0;
  PotentialSpec potential;
  Matrix matrix;

  int dim() const { return m * (2 * K + 1); }
  // stacked index of component s of Fourier block n, n in [-K, K]
  int row(int n, int s) const { return (n + K) * m + s; }
};

struct EigenPair {
  Complex lambda;
  double t = 0.0;
  int K = 0;
  int m = 0;
  Vector coefficients;    // stacked Fourier blocks, unit norm
  double residual = 0.0;  // ||(A_{K+V} - lambda) (coefficients padded)||

  Vector block(int n) const { return coefficients.segment((n + K) * m, m); }
  double block_norm(int n) const {
    return coefficients.segment((n + K) * m, m).norm();
  }
};

// Throws DegenerateQuasimomentumError for t within angle_tol of {0, pi, 2pi}
// or outside (0, 2pi); DimensionError for K < V + 1.
TruncatedOperator assemble(const PotentialSpec& spec, double t, int K,
                           double angle_tol = kAngleTol);

// All dim eigenpairs of the dense matrix, sorted by (Re, Im), eigenvectors
// unit-normalized with a deterministic phase (largest-norm Fourier block gets
// a real positive leading component). Residuals are recorded against the
// K+V truncation, which the potential bandwidth makes exact for this pair.
std::vector<EigenPair> eigen_solve(const TruncatedOperator& op,
                                   int max_dim = kMaxGalerkinDim);

// ||(A_{K'} - lambda) Psi_pad|| for K' >= K + V; bounds the backward error of
// the pair in the larger space.
double residual(const PotentialSpec& spec, const EigenPair& pair, int K_prime);

// Value of Psi(x) = sum_n block(n) e^{i(2pi n + t)x}.
Vector evaluate_eigenfunction(const EigenPair& pair, double x);

// Truncation-convergence probe: the eigenvalue tracked across the K_list is
// the one nearest the unperturbed center (2pi k + t)^2 + mu_j.
struct SweepTarget {
  int k = 0;  // Fourier index
  int j = 0;  // distinct eigenvalue of the mean matrix
};

struct SweepEntry {
  int K = 0;
  Complex lambda;
  bool matched = false;
  double diff = 0.0;  // |lambda - previous matched lambda|, 0 for the first
};

struct SweepRow {
  SweepTarget target;
  Complex center;
  std::vector<SweepEntry> entries;
  bool cauchy = true;  // false when the final difference fails to shrink
};

std::vector<SweepRow> convergence_sweep(const PotentialSpec& spec, double t,
                                        const std::vector<int>& K_list,
                                        const std::vector<SweepTarget>& targets);

}  // namespace qpsl
