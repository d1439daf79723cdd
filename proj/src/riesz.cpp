#include "qpsl/riesz.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "qpsl/errors.hpp"
#include "qpsl/linalg.hpp"
#include "qpsl/matrix_structure.hpp"

namespace qpsl {

namespace {

// Uniform in [0,1) from the top 53 bits; avoids the implementation-defined
// std::normal_distribution so seeds reproduce across standard libraries.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

double gaussian(std::mt19937_64& rng) {
  double u1 = canonical(rng);
  while (u1 <= 0.0) u1 = canonical(rng);
  const double u2 = canonical(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::pair<double, double> gram_extremes(const std::vector<const Vector*>& cols) {
  const int n = static_cast<int>(cols.size());
  if (n == 0) return {0.0, 0.0};
  Matrix G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G(a, b) = inner(*cols[a], *cols[b]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (G + G.adjoint()));
  if (es.info() != Eigen::Success)
    throw SolverError("Gram eigenvalue computation failed");
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

SimplicityReport simplicity_certificate(const PairingReport& report,
                                        const std::vector<EigenPair>& pairs,
                                        int k_min) {
  SimplicityReport out;
  for (size_t p = 0; p < report.predictions.size(); ++p) {
    const Prediction& pred = report.predictions[p];
    if (std::abs(pred.k) < k_min) continue;
    SimplicityEntry entry;
    entry.k = pred.k;
    entry.j = pred.j;
    for (const EigenPair& pair : pairs)
      if (std::abs(pair.lambda - pred.center) <= pred.disk_radius)
        ++entry.eigenvalues_in_disk;
    const Assignment* a = nullptr;
    for (const Assignment& cand : report.assignments)
      if (cand.prediction_index == static_cast<int>(p)) a = &cand;
    if (a != nullptr && a->pair_indices.size() == 1) {
      const int idx = a->pair_indices[0];
      entry.threshold = 2.0 * pairs[idx].residual;
      entry.separation = std::numeric_limits<double>::infinity();
      for (size_t e = 0; e < pairs.size(); ++e)
        if (static_cast<int>(e) != idx)
          entry.separation = std::min(
              entry.separation, std::abs(pairs[e].lambda - pairs[idx].lambda));
      entry.certified =
          entry.eigenvalues_in_disk == 1 && entry.separation > entry.threshold;
    }
    if (!entry.certified) ++out.violations;
    out.entries.push_back(entry);
  }
  return out;
}

BiorthogonalFamily build_biorthogonal(const TruncatedOperator& op,
                                      const TruncatedOperator& op_star,
                                      const std::vector<EigenPair>& pairs,
                                      const std::vector<EigenPair>& pairs_star,
                                      const PairingReport& report,
                                      const PairingReport& report_star,
                                      int k_min, int k_family) {
  if (op.K != op_star.K || op.m != op_star.m ||
      std::abs(op.t - op_star.t) > 1e-12)
    throw DimensionError("primal and adjoint solves disagree in t, K or m");

  BiorthogonalFamily family;
  family.t = op.t;
  family.K = op.K;
  family.m = op.m;
  family.k_min = k_min;

  if (k_family < 0) {
    for (const Assignment& a : report.assignments) {
      const Prediction& pred = report.predictions[a.prediction_index];
      if (a.full && pred.multiplicity == 1 && std::abs(pred.k) >= k_min)
        k_family = std::max(k_family, std::abs(pred.k));
    }
    if (k_family < 0) k_family = 0;
  }
  family.k_family = k_family;

  for (const Assignment& a : report.assignments) {
    const Prediction& pred = report.predictions[a.prediction_index];
    if (!a.full || pred.multiplicity != 1) continue;
    if (std::abs(pred.k) < k_min || std::abs(pred.k) > k_family) continue;
    const Assignment* b = report_star.find(pred.k, pred.j);
    if (b == nullptr || !b->full || b->pair_indices.size() != 1) continue;
    FamilyMember member;
    member.k = pred.k;
    member.j = pred.j;
    member.psi = pairs[a.pair_indices[0]].coefficients;
    member.psi_star = pairs_star[b->pair_indices[0]].coefficients;
    member.pairing = inner(member.psi, member.psi_star);
    if (std::abs(member.pairing) < 1e-10)
      throw VanishingPairingError(
          "eigenfunction pairing vanished at k = " + std::to_string(pred.k) +
          ", j = " + std::to_string(pred.j));
    member.chi = member.psi_star / std::conj(member.pairing);
    family.members.push_back(std::move(member));
  }

  // Low block: root functions of both truncations restricted to the lowest
  // m(2 k_min - 1) eigenvalues (by real part), with the duals solved jointly
  // from the cross-Gram of the two invariant subspaces.
  if (k_min >= 1) {
    const int dim_low = op.m * (2 * k_min - 1);
    if (dim_low >= op.dim())
      throw DimensionError("k_min leaves no high block in the truncation");
    std::vector<double> reals;
    for (const EigenPair& pair : pairs) reals.push_back(pair.lambda.real());
    std::sort(reals.begin(), reals.end());
    const double boundary = 0.5 * (reals[dim_low - 1] + reals[dim_low]);
    if (!(reals[dim_low] - reals[dim_low - 1] > 0.0))
      throw SolverError("low cluster is not separated from the rest of the spectrum");

    const auto select = [boundary](Complex z) { return z.real() < boundary; };
    const OrderedSchur os = ordered_schur(op.matrix, select);
    const OrderedSchur os_star = ordered_schur(op_star.matrix, select);
    if (os.selected_count != dim_low || os_star.selected_count != dim_low)
      throw SolverError("low-cluster selection does not have the expected dimension");

    const Matrix Z = os.U.leftCols(dim_low);
    const Matrix Zs = os_star.U.leftCols(dim_low);
    const EigenStructure low = analyze_matrix(Z.adjoint() * op.matrix * Z);
    const EigenStructure low_star =
        analyze_matrix(Zs.adjoint() * op_star.matrix * Zs);

    Matrix P(op.dim(), dim_low), S(op.dim(), dim_low);
    for (int i = 0; i < dim_low; ++i) {
      P.col(i) = Z * low.flat[i].vector;
      S.col(i) = Zs * low_star.flat[i].vector;
    }
    const Matrix G = S.adjoint() * P;
    Eigen::JacobiSVD<Matrix> svd(G);
    if (svd.singularValues()(dim_low - 1) <
        1e-10 * svd.singularValues()(0))
      throw VanishingPairingError(
          "low-block primal and adjoint subspaces are numerically orthogonal");
    const Matrix X = S * G.adjoint().inverse();

    for (int i = 0; i < dim_low; ++i) {
      FamilyMember member;
      member.k = 0;
      member.j = i;
      member.depth = low.flat[i].depth;
      member.low_block = true;
      member.psi = P.col(i);
      member.psi_star = X.col(i);
      member.chi = X.col(i);
      member.pairing = inner(member.psi, member.chi);
      family.members.push_back(std::move(member));
    }
  }
  return family;
}

std::vector<BariRow> bari_partial_sums(const Vector& f,
                                       const BiorthogonalFamily& family,
                                       const std::vector<int>& K_report) {
  if (std::abs(f.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("Bari test function must have unit norm");
  if (!family.members.empty() && f.size() != family.members[0].psi.size())
    throw DimensionError("test function does not match the family's space");
  std::vector<BariRow> rows;
  for (int Kp : K_report) {
    BariRow row;
    row.K_report = Kp;
    for (const FamilyMember& member : family.members) {
      if (!member.low_block && std::abs(member.k) > Kp) continue;
      row.sum_psi += std::norm(inner(f, member.psi));
      row.sum_chi += std::norm(inner(f, member.chi));
    }
    rows.push_back(row);
  }
  return rows;
}

std::pair<double, double> riesz_condition_estimate(const BiorthogonalFamily& family,
                                                   int sample_size) {
  std::vector<const Vector*> cols;
  for (const FamilyMember& member : family.members) {
    cols.push_back(&member.psi);
    if (sample_size > 0 && static_cast<int>(cols.size()) >= sample_size) break;
  }
  return gram_extremes(cols);
}

std::pair<double, double> dual_frame_estimate(const BiorthogonalFamily& family) {
  std::vector<const Vector*> cols;
  for (const FamilyMember& member : family.members) cols.push_back(&member.chi);
  return gram_extremes(cols);
}

Vector random_test_function(int K, int m, int support, unsigned seed) {
  if (support > K) throw DimensionError("test function support exceeds the cutoff");
  std::mt19937_64 rng(seed);
  Vector f = Vector::Zero(m * (2 * K + 1));
  for (int n = -support; n <= support; ++n)
    for (int s = 0; s < m; ++s)
      f((n + K) * m + s) = Complex(gaussian(rng), gaussian(rng));
  const double norm = f.norm();
  if (norm == 0.0) throw SolverError("degenerate random test function");
  return f / norm;
}

}  // namespace qpsl
