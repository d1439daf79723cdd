#pragma once

#include <utility>
#include <vector>

#include "qpsl/galerkin.hpp"
#include "qpsl/matrix_structure.hpp"
#include "qpsl/potential.hpp"
#include "qpsl/types.hpp"

namespace qpsl {

// Smallest |k| admitted into asymptotic statistics by default.
inline constexpr int kDefaultKMin = 5;

// First-order eigenvalue prediction: the disk around (2pi k + t)^2 + mu_j
// that is expected to trap exactly m_j eigenvalues of the full operator.
struct Prediction {
  int k = 0;
  int j = 0;  // distinct eigenvalue index of the mean matrix
  Complex center;
  double disk_radius = 0.0;
  int multiplicity = 1;      // m_j
  int max_chain_length = 1;  // r_j
  double gap = 0.0;          // a_j, +inf for a single distinct eigenvalue
  Vector first_order_vector;  // primal eigenvector, set when m_j == 1
  std::vector<std::vector<Vector>> chain_basis;     // primal chains, by depth
  std::vector<std::vector<Vector>> adjoint_chains;  // chains of C^H, by depth
};

// (2pi k + t)^2, the potential-free location.
Complex coarse_predict(double t, int k);

// Default disk-radius scale: 10x the l1 Fourier norm of Q - C.
double default_disk_rho(const PotentialSpec& spec);

// One prediction per (k in k_range, distinct j). Radius rule:
//   min(a_j / 2, rho * (ln(|k|+2) / (|k|+1))^{1/r_j})
// with a numerical floor of 1e-8 * (1 + |center|) so that exactly solvable
// cases still pair. The 1/r_j power widens disks where a Jordan chain slows
// the eigenvalue convergence to that root.
std::vector<Prediction> predict(const MeanMatrixAnalysis& mean, double t,
                                const std::vector<int>& k_range, double rho);

// Outcome of assigning one prediction's disk its m_j eigenvalues.
struct Assignment {
  int prediction_index = -1;
  std::vector<int> pair_indices;   // indices into the EigenPair list
  bool full = false;               // all m_j slots filled
  double max_distance = 0.0;       // max |lambda - center| over members
  double cluster_width = 0.0;      // max pairwise |lambda_a - lambda_b|
  double eigenvalue_error = 0.0;   // e_k = max_distance
  double eigenfunction_error = 0.0;  // f_k, NaN unless m_j == 1 and full
};

struct PairingReport {
  std::vector<Prediction> predictions;
  std::vector<Assignment> assignments;  // predictions with >= 1 member; see full
  std::vector<int> unmatched_predictions;
  std::vector<int> unmatched_eigenvalues;
  std::vector<char> overlap_flags;  // per prediction: disk intersects another

  const Assignment* find(int k, int j) const;
};

// Exact minimum-distance assignment of eigenvalues to disks, maximizing the
// number of matched eigenvalues first; nothing is ever force-matched outside
// a disk. Predictions with multiplicity m_j collect up to m_j eigenvalues.
PairingReport pair_eigenvalues(const std::vector<EigenPair>& pairs,
                               const std::vector<Prediction>& predictions);

enum class DecayModel { lnk_over_k, k_pow };

struct DecayFit {
  double exponent = 0.0;
  double r2 = 0.0;
  bool exact = false;  // errors at numerical zero, no rate to fit
  bool valid = false;
  int points = 0;
};

// Least-squares slope of log e_k against log(ln|k|/|k|) or log|k|. Both signs
// of k are pooled by |k| taking the larger error; |k| < k_min is dropped.
DecayFit decay_fit(const std::vector<std::pair<int, double>>& errors,
                   DecayModel model, int k_min = kDefaultKMin);

// min over unimodular alpha of || Psi - alpha v_j e^{i(2pi k+t)x} ||
//  = sqrt(2 - 2 |inner(c_k, v_j)|). Throws for multiple mu_j.
double eigenfunction_error(const EigenPair& pair, const Prediction& prediction);

// | ||c_k||^2 - 1 |, the defect of Psi's projection onto the k-th free
// eigenspace.
double projection_deficit(const EigenPair& pair, int k);

// Fourier block k of (Q - C) Psi: sum_{nu != 0} Qhat(nu) c_{k-nu}.
Vector perturbed_block(const PotentialSpec& spec, const EigenPair& pair, int k);

// Defect of the depth-s perturbation identity
//   (lambda - mu_{k,j})^{s+1} (Psi, Phi*_{k,j,s})
//     = sum_{p=0}^{s} (lambda - mu_{k,j})^p ((Q-C) Psi, Phi*_{k,j,p})
// evaluated from Fourier blocks, using the prediction's adjoint chain
// `chain` (the longest first).
double perturbation_residual(const EigenPair& pair, const Prediction& prediction,
                             const PotentialSpec& spec, int s, int chain = 0);

struct KPair {
  int k = 0;
  EigenPair pair;
};

struct Lemma2Table {
  int i = 0;
  int p = 0;
  std::vector<std::pair<int, double>> values;  // (k, |((Q-C)Psi)_k . v*_{i,p}|)
  DecayFit fit;                                // lnk_over_k model
};

// Decay of the coupling of Psi_k to the depth-p adjoint root vector of mu_i.
Lemma2Table lemma2_decay(const std::vector<KPair>& pairs_by_k,
                         const PotentialSpec& spec,
                         const EigenStructure& adjoint, int i, int p);

// max over all adjoint chain vectors of |inner(c_k, v*)|; stays bounded away
// from zero for paired eigenfunctions.
double lemma3_floor(const EigenPair& pair, const EigenStructure& adjoint, int k);

// |(lambda - (2pi n+t)^2) c_n[s] - sum_p [Qhat(n-p) c_p][s]|, the n-th Fourier
// relation of the eigen-equation. Throws when lambda is within 1e-8 of
// (2pi n + t)^2: the rearranged relation solves for c_n by dividing by that
// difference, so a near-resonant row carries no information.
double fourier_relation_residual(const EigenPair& pair, const PotentialSpec& spec,
                                 int n, int s);

// Per-branch extraction helpers over a pairing report; only fully matched
// disks contribute.
std::vector<std::pair<int, double>> eigenvalue_error_table(const PairingReport& report,
                                                           int j);
std::vector<std::pair<int, double>> eigenfunction_error_table(const PairingReport& report,
                                                              int j);
std::vector<KPair> paired_by_k(const PairingReport& report,
                               const std::vector<EigenPair>& pairs, int j);

}  // namespace qpsl
