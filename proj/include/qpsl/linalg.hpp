#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qpsl/types.hpp"

namespace qpsl {

// Dense non-Hermitian eigendecomposition. Eigenvectors come back with unit
// Euclidean norm, in solver order (callers sort).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;  // column i pairs with values(i)
};
EigenDecomposition dense_eigensolve(const Matrix& A);

// Complex Schur form A = U T U^H with the eigenvalues satisfying `select`
// moved to the leading diagonal block by unitary swaps. The first
// `selected_count` columns of U then span the corresponding invariant
// subspace.
struct OrderedSchur {
  Matrix U;
  Matrix T;
  int selected_count = 0;
};
OrderedSchur ordered_schur(const Matrix& A,
                           const std::function<bool(Complex)>& select);

// Same reordering applied to an existing Schur pair (A = U T U^H);
// `select[i]` marks diagonal position i for the leading block.
OrderedSchur reorder_schur(Matrix T, Matrix U, const std::vector<char>& select);

// Orthonormal basis of the nullspace of A: right singular vectors with
// singular value <= tol. Returns an n x k matrix (k possibly 0).
Matrix nullspace(const Matrix& A, double tol);

// Orthonormal basis of the column span, rank-truncated at tol.
Matrix orthonormal_span(const Matrix& A, double tol);

// Rotates v by a unimodular factor so its first component of magnitude
// > tol is real positive. Deterministic representative of the ray {alpha v}.
Vector canonical_phase(const Vector& v, double tol = 1e-12);

}  // namespace qpsl
