#pragma once

#include <utility>
#include <vector>

#include "qpsl/asymptotics.hpp"
#include "qpsl/galerkin.hpp"
#include "qpsl/types.hpp"

namespace qpsl {

// One entry of the (eigenfunction, dual) system. High-|k| members come from
// the disk pairing of both solves; low-block members are root functions of
// the truncated operator restricted to its lowest cluster, whose duals are
// built jointly (no canonical adjoint labeling exists inside a cluster), so
// there psi_star coincides with chi.
struct FamilyMember {
  int k = 0;
  int j = 0;
  int depth = 0;  // chain depth for low-block root functions
  bool low_block = false;
  Vector psi;       // root function of the operator with potential Q
  Vector psi_star;  // partner from the adjoint solve
  Vector chi;       // dual: inner(psi, chi) = 1
  Complex pairing;  // inner(psi, psi_star)
};

struct BiorthogonalFamily {
  double t = 0.0;
  int K = 0;
  int m = 0;
  int k_min = kDefaultKMin;
  int k_family = 0;  // largest |k| included
  std::vector<FamilyMember> members;
};

struct SimplicityEntry {
  int k = 0;
  int j = 0;
  int eigenvalues_in_disk = 0;
  double separation = 0.0;  // distance to the nearest other eigenvalue
  double threshold = 0.0;   // 2x the matched pair's residual
  bool certified = false;
};

struct SimplicityReport {
  std::vector<SimplicityEntry> entries;  // disks with |k| >= k_min
  int violations = 0;
};

// Certifies one eigenvalue per disk and numerical simplicity (separation
// beyond twice the residual) for every prediction with |k| >= k_min.
SimplicityReport simplicity_certificate(const PairingReport& report,
                                        const std::vector<EigenPair>& pairs,
                                        int k_min = kDefaultKMin);

// Assembles the biorthogonal family from the primal and adjoint solves.
// report_star must be built against predictions from adjoint_view() of the
// same mean analysis so that (k, j) labels align. k_family < 0 means the
// largest fully paired |k|. Throws VanishingPairingError when some pairing
// inner(psi, psi_star) is numerically zero or the low-block duals are
// ill-posed.
BiorthogonalFamily build_biorthogonal(const TruncatedOperator& op,
                                      const TruncatedOperator& op_star,
                                      const std::vector<EigenPair>& pairs,
                                      const std::vector<EigenPair>& pairs_star,
                                      const PairingReport& report,
                                      const PairingReport& report_star,
                                      int k_min = kDefaultKMin,
                                      int k_family = -1);

struct BariRow {
  int K_report = 0;
  double sum_psi = 0.0;  // sum over members with |k| <= K_report of |inner(f, psi)|^2
  double sum_chi = 0.0;  //   ... of |inner(f, chi)|^2, low block always included
};

// Partial sums of the two quadratic-mean series of the family against a unit
// test function f (stacked Fourier blocks, same layout as the members).
std::vector<BariRow> bari_partial_sums(const Vector& f,
                                       const BiorthogonalFamily& family,
                                       const std::vector<int>& K_report);

// Finite-section frame bounds: extremal eigenvalues of the Gram matrix of the
// psi members (sample_size > 0 caps the member count, 0 means all).
std::pair<double, double> riesz_condition_estimate(const BiorthogonalFamily& family,
                                                   int sample_size = 0);

// Same for the dual family {chi}.
std::pair<double, double> dual_frame_estimate(const BiorthogonalFamily& family);

// Deterministic unit test functions supported on Fourier modes |n| <= support,
// embedded in the family's stacked space.
Vector random_test_function(int K, int m, int support, unsigned seed);

}  // namespace qpsl
