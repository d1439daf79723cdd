#include "qpsl/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "qpsl/errors.hpp"

namespace qpsl {

EigenDecomposition dense_eigensolve(const Matrix& A) {
  Eigen::ComplexEigenSolver<Matrix> es(A, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw SolverError("complex eigensolver failed to converge (dim " +
                      std::to_string(A.rows()) + ")");
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Swaps the adjacent diagonal entries T(i,i), T(i+1,i+1) of an upper
// triangular T by a unitary similarity, accumulating into U.
void swap_adjacent(Matrix& T, Matrix& U, int i) {
  const Complex a = T(i, i);
  const Complex b = T(i, i + 1);
  const Complex d = T(i + 1, i + 1);
  // eigenvector of [[a, b],[0, d]] for eigenvalue d
  Complex w1 = b;
  Complex w2 = d - a;
  const double r = std::sqrt(std::norm(w1) + std::norm(w2));
  Matrix G = Matrix::Identity(2, 2);
  if (r > 0.0) {
    G(0, 0) = w1 / r;
    G(1, 0) = w2 / r;
    G(0, 1) = -std::conj(w2) / r;
    G(1, 1) = std::conj(w1) / r;
  }
  T.middleRows(i, 2) = G.adjoint() * T.middleRows(i, 2);
  T.middleCols(i, 2) = T.middleCols(i, 2) * G;
  U.middleCols(i, 2) = U.middleCols(i, 2) * G;
  T(i + 1, i) = 0.0;
}

}  // namespace

OrderedSchur ordered_schur(const Matrix& A,
                           const std::function<bool(Complex)>& select) {
  Eigen::ComplexSchur<Matrix> schur(A, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw SolverError("complex Schur decomposition failed (dim " +
                      std::to_string(A.rows()) + ")");
  const Matrix& T = schur.matrixT();
  const int n = static_cast<int>(A.rows());
  std::vector<char> sel(n);
  for (int i = 0; i < n; ++i) sel[i] = select(T(i, i)) ? 1 : 0;
  return reorder_schur(T, schur.matrixU(), sel);
}

OrderedSchur reorder_schur(Matrix T, Matrix U, const std::vector<char>& select) {
  const int n = static_cast<int>(T.rows());
  if (static_cast<int>(select.size()) != n)
    throw DimensionError("reorder_schur: selection length does not match T");
  OrderedSchur out{std::move(U), std::move(T), 0};
  std::vector<char> sel = select;

  int pos = 0;
  for (int i = 0; i < n; ++i) {
    if (!sel[i]) continue;
    for (int j = i; j > pos; --j) {
      swap_adjacent(out.T, out.U, j - 1);
      std::swap(sel[j - 1], sel[j]);
    }
    ++pos;
  }
  out.selected_count = pos;
  return out;
}

Matrix nullspace(const Matrix& A, double tol) {
  if (A.rows() == 0 || A.cols() == 0)
    return Matrix::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

Matrix orthonormal_span(const Matrix& A, double tol) {
  if (A.cols() == 0) return Matrix::Zero(A.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

Vector canonical_phase(const Vector& v, double tol) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      const Complex phase = v(i) / std::abs(v(i));
      return v / phase;
    }
  }
  return v;
}

}  // namespace qpsl
