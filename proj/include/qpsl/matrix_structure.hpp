#pragma once

#include <vector>

#include "qpsl/types.hpp"

namespace qpsl {

// One Jordan chain attached to a distinct eigenvalue mu_j:
//   (C - mu_j) eigenvector ~ 0
//   (C - mu_j) associated[0] ~ eigenvector
//   (C - mu_j) associated[r] ~ associated[r-1]
// The eigenvector has unit norm and canonical phase; the associated vectors
// carry whatever scale the chain relation dictates.
struct JordanChain {
  int eigenvalue_index = 0;  // index into EigenStructure::distinct
  Vector eigenvector;
  std::vector<Vector> associated;

  int length() const { return 1 + static_cast<int>(associated.size()); }
  // depth 0 is the eigenvector, depth r >= 1 is associated[r-1]
  const Vector& at(int depth) const {
    return depth == 0 ? eigenvector : associated[depth - 1];
  }
};

struct DistinctEigenvalue {
  Complex mu;
  int multiplicity = 0;  // algebraic multiplicity m_j
  std::vector<JordanChain> chains;
  int max_chain_length = 1;  // r_j
};

// One entry of the spectrum counted with multiplicity, pointing back into
// the chain it came from.
struct FlatEntry {
  Complex mu;
  Vector vector;
  int distinct_index = 0;
  int chain_index = 0;
  int depth = 0;  // 0 = eigenvector
};

struct EigenStructure {
  int dim = 0;
  std::vector<DistinctEigenvalue> distinct;  // ordered by (Re mu, Im mu)
  std::vector<FlatEntry> flat;               // dim entries, chain order
  std::vector<double> gaps;                  // a_j; +inf when only one distinct

  int distinct_count() const { return static_cast<int>(distinct.size()); }
};

// Schur-based eigenvalue clustering plus staircase rank analysis of
// (C - mu I)^k on each cluster's invariant subspace. cluster_tol <= 0 picks
// the default 1e-8 * max(||C||_F, 1). Throws ClusterAmbiguityError when two
// clusters come closer than 10 * cluster_tol (the split would depend on the
// tolerance choice), SolverError when the rank analysis is inconsistent.
EigenStructure analyze_matrix(const Matrix& C, double cluster_tol = 0.0);

// Same analysis for C^H, reordered so distinct[j].mu == conj(primal mu_j)
// and, for simple eigenvalues, rescaled so inner(v_j, v_j*) = 1. Throws
// VanishingPairingError when that pairing is numerically zero.
EigenStructure adjoint_structure(const EigenStructure& structure, const Matrix& C,
                                 double cluster_tol = 0.0);

// a_j = min_{i != j} |mu_j - mu_i|; +inf when there is a single distinct
// eigenvalue.
double spectral_gap(const EigenStructure& structure, int j);

// Convenience bundle: primal and adjoint analyses of the same matrix.
struct MeanMatrixAnalysis {
  Matrix C;
  EigenStructure primal;
  EigenStructure adjoint;
};

MeanMatrixAnalysis analyze_mean_matrix(const Matrix& C, double cluster_tol = 0.0);

// The same analysis seen from the adjoint operator: primal and adjoint roles
// swap, C becomes C^H, and the distinct-eigenvalue indexing stays aligned.
MeanMatrixAnalysis adjoint_view(const MeanMatrixAnalysis& mean);

}  // namespace qpsl
