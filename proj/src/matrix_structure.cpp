#include "qpsl/matrix_structure.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "qpsl/errors.hpp"
#include "qpsl/linalg.hpp"

namespace qpsl {

namespace {

double default_tol(const Matrix& C) {
  return 1e-8 * std::max(C.norm(), 1.0);
}

// Union-find over Schur diagonal entries: i ~ j when |d_i - d_j| <= tol.
std::vector<int> cluster_labels(const Vector& d, double tol) {
  const int n = static_cast<int>(d.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(d(i) - d(j)) <= tol) parent[find(i)] = find(j);
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = find(i);
  return label;
}

struct Cluster {
  Complex mu;
  std::vector<int> members;  // Schur diagonal positions
};

bool mu_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Builds the Jordan chains of the q x q matrix B with (numerically) single
// eigenvalue mu, in subspace coordinates. Returns chains as lists of vectors
// from eigenvector (depth 0) upward.
std::vector<std::vector<Vector>> staircase_chains(const Matrix& B, Complex mu,
                                                  double rank_tol) {
  const int q = static_cast<int>(B.rows());
  const Matrix N = B - mu * Matrix::Identity(q, q);

  // Kernel bases of N^k until the whole subspace is exhausted.
  std::vector<Matrix> kernels;   // kernels[k] spans ker N^k, kernels[0] empty
  kernels.push_back(Matrix::Zero(q, 0));
  Matrix P = Matrix::Identity(q, q);
  int lmax = 0;
  for (int k = 1; k <= q; ++k) {
    P = N * P;
    const double tol = rank_tol * std::max(P.norm(), 1.0);
    kernels.push_back(nullspace(P, tol));
    if (kernels[k].cols() <= kernels[k - 1].cols())
      throw SolverError("Jordan rank analysis stalled at power " +
                        std::to_string(k));
    if (kernels[k].cols() == q) {
      lmax = k;
      break;
    }
  }
  if (lmax == 0)
    throw SolverError("Jordan rank analysis did not exhaust the cluster subspace");

  // Weyr counts: w_k chains have length >= k, so exactly w_k - w_{k+1}
  // chains end at height k.
  std::vector<int> w(lmax + 2, 0);
  for (int k = 1; k <= lmax; ++k)
    w[k] = static_cast<int>(kernels[k].cols() - kernels[k - 1].cols());

  std::vector<std::vector<Vector>> chains;
  // Chain elements of height l already claimed by taller chains, plus
  // ker N^{l-1}, must be avoided when picking new chain tops at height l.
  for (int l = lmax; l >= 1; --l) {
    const int want = w[l] - w[l + 1];
    if (want == 0) continue;
    Matrix used(q, kernels[l - 1].cols());
    used.leftCols(kernels[l - 1].cols()) = kernels[l - 1];
    for (const auto& chain : chains) {
      used.conservativeResize(Eigen::NoChange, used.cols() + 1);
      used.col(used.cols() - 1) = chain[l - 1];  // element at height l
    }
    const Matrix span = orthonormal_span(used, rank_tol);
    Matrix cand = kernels[l];
    if (span.cols() > 0) cand -= span * (span.adjoint() * cand);
    Eigen::JacobiSVD<Matrix> svd(cand, Eigen::ComputeThinU);
    if (svd.singularValues().size() < want ||
        svd.singularValues()(want - 1) <= rank_tol)
      throw SolverError("could not separate Jordan chain tops at height " +
                        std::to_string(l));
    for (int c = 0; c < want; ++c) {
      std::vector<Vector> chain(l);
      chain[l - 1] = svd.matrixU().col(c);
      for (int r = l - 1; r >= 1; --r) chain[r - 1] = N * chain[r];
      chains.push_back(std::move(chain));
    }
  }

  std::stable_sort(chains.begin(), chains.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return chains;
}

}  // namespace

EigenStructure analyze_matrix(const Matrix& C, double cluster_tol) {
  const int m = static_cast<int>(C.rows());
  if (m < 1 || C.cols() != m)
    throw DimensionError("analyze_matrix needs a square matrix of size >= 1");
  const double ctol = cluster_tol > 0.0 ? cluster_tol : default_tol(C);
  const double rank_tol = default_tol(C);

  Eigen::ComplexSchur<Matrix> schur(C, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw SolverError("complex Schur decomposition failed");
  const Matrix T = schur.matrixT();
  const Matrix U = schur.matrixU();
  const Vector d = T.diagonal();

  const std::vector<int> label = cluster_labels(d, ctol);
  std::vector<Cluster> clusters;
  {
    std::vector<int> seen;
    for (int i = 0; i < m; ++i) {
      auto it = std::find(seen.begin(), seen.end(), label[i]);
      if (it == seen.end()) {
        seen.push_back(label[i]);
        clusters.push_back({Complex(0, 0), {}});
      }
      clusters[std::find(seen.begin(), seen.end(), label[i]) - seen.begin()]
          .members.push_back(i);
    }
  }
  for (auto& c : clusters) {
    Complex sum(0, 0);
    for (int i : c.members) sum += d(i);
    c.mu = sum / static_cast<double>(c.members.size());
  }

  // Distances between distinct clusters must clear 10 * cluster_tol, and a
  // chained cluster must not stretch past that either; otherwise the
  // grouping depends on the tolerance choice and we refuse to guess.
  for (size_t a = 0; a < clusters.size(); ++a) {
    for (int i : clusters[a].members)
      for (int j : clusters[a].members)
        if (std::abs(d(i) - d(j)) > 10.0 * ctol)
          throw ClusterAmbiguityError(
              "eigenvalue cluster spans more than 10x the cluster tolerance");
    for (size_t b = a + 1; b < clusters.size(); ++b)
      for (int i : clusters[a].members)
        for (int j : clusters[b].members)
          if (std::abs(d(i) - d(j)) < 10.0 * ctol)
            throw ClusterAmbiguityError(
                "eigenvalue separation falls between cluster_tol and "
                "10*cluster_tol; adjust cluster_tol");
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return mu_less(a.mu, b.mu); });

  EigenStructure out;
  out.dim = m;
  for (size_t jc = 0; jc < clusters.size(); ++jc) {
    const Cluster& cl = clusters[jc];
    const int q = static_cast<int>(cl.members.size());
    std::vector<char> sel(m, 0);
    for (int i : cl.members) sel[i] = 1;
    const OrderedSchur os = reorder_schur(T, U, sel);
    const Matrix Z = os.U.leftCols(q);
    const Matrix B = Z.adjoint() * C * Z;

    DistinctEigenvalue dist;
    dist.mu = cl.mu;
    dist.multiplicity = q;
    int total_len = 0;
    for (auto& sub : staircase_chains(B, cl.mu, rank_tol)) {
      JordanChain chain;
      chain.eigenvalue_index = static_cast<int>(jc);
      std::vector<Vector> lifted(sub.size());
      for (size_t r = 0; r < sub.size(); ++r) lifted[r] = Z * sub[r];
      const double scale = lifted[0].norm();
      if (scale < 1e-14)
        throw SolverError("degenerate Jordan chain bottom");
      Complex phase(1, 0);
      for (int i = 0; i < m; ++i)
        if (std::abs(lifted[0](i)) > 1e-12 * scale) {
          phase = lifted[0](i) / std::abs(lifted[0](i));
          break;
        }
      for (auto& v : lifted) v /= scale * phase;
      chain.eigenvector = lifted[0];
      chain.associated.assign(lifted.begin() + 1, lifted.end());
      total_len += chain.length();
      dist.max_chain_length = std::max(dist.max_chain_length, chain.length());
      dist.chains.push_back(std::move(chain));
    }
    if (total_len != q)
      throw SolverError("Jordan chain lengths do not sum to the cluster size");
    out.distinct.push_back(std::move(dist));
  }

  for (size_t j = 0; j < out.distinct.size(); ++j) {
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < out.distinct.size(); ++i)
      if (i != j)
        gap = std::min(gap, std::abs(out.distinct[j].mu - out.distinct[i].mu));
    out.gaps.push_back(gap);
    for (size_t ci = 0; ci < out.distinct[j].chains.size(); ++ci) {
      const JordanChain& chain = out.distinct[j].chains[ci];
      for (int r = 0; r < chain.length(); ++r)
        out.flat.push_back({out.distinct[j].mu, chain.at(r),
                            static_cast<int>(j), static_cast<int>(ci), r});
    }
  }
  if (static_cast<int>(out.flat.size()) != m)
    throw SolverError("spectrum with multiplicity does not have dimension many entries");
  return out;
}

EigenStructure adjoint_structure(const EigenStructure& structure, const Matrix& C,
                                 double cluster_tol) {
  EigenStructure raw = analyze_matrix(C.adjoint(), cluster_tol);
  if (raw.distinct_count() != structure.distinct_count())
    throw SolverError("adjoint analysis found a different number of distinct eigenvalues");

  const int p = structure.distinct_count();
  const double match_tol =
      10.0 * (cluster_tol > 0.0 ? cluster_tol : default_tol(C));
  std::vector<int> perm(p, -1);
  std::vector<char> taken(p, 0);
  for (int j = 0; j < p; ++j) {
    const Complex target = std::conj(structure.distinct[j].mu);
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i) {
      if (taken[i]) continue;
      const double dist = std::abs(raw.distinct[i].mu - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best < 0 || best_dist > match_tol)
      throw SolverError("adjoint eigenvalues do not pair with conjugates of the primal ones");
    taken[best] = 1;
    perm[j] = best;
  }

  EigenStructure out;
  out.dim = raw.dim;
  for (int j = 0; j < p; ++j) {
    DistinctEigenvalue dist = raw.distinct[perm[j]];
    if (dist.multiplicity != structure.distinct[j].multiplicity)
      throw SolverError("adjoint multiplicity mismatch");
    for (auto& chain : dist.chains) chain.eigenvalue_index = j;
    if (dist.multiplicity == 1) {
      // Rescale so inner(v_j, v_j*) = 1; inner() is conjugate-linear in its
      // second argument, hence the conjugated divisor.
      const Vector& v = structure.distinct[j].chains[0].eigenvector;
      const Complex g = inner(v, dist.chains[0].eigenvector);
      if (std::abs(g) < 1e-10)
        throw VanishingPairingError(
            "eigenvector pairing with the adjoint eigenvector is numerically zero");
      dist.chains[0].eigenvector /= std::conj(g);
    }
    out.distinct.push_back(std::move(dist));
  }
  for (int j = 0; j < p; ++j) {
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i)
      if (i != j) gap = std::min(gap, std::abs(out.distinct[j].mu - out.distinct[i].mu));
    out.gaps.push_back(gap);
    for (size_t ci = 0; ci < out.distinct[j].chains.size(); ++ci) {
      const JordanChain& chain = out.distinct[j].chains[ci];
      for (int r = 0; r < chain.length(); ++r)
        out.flat.push_back({out.distinct[j].mu, chain.at(r), j,
                            static_cast<int>(ci), r});
    }
  }
  return out;
}

double spectral_gap(const EigenStructure& structure, int j) {
  if (j < 0 || j >= structure.distinct_count())
    throw DimensionError("spectral_gap: eigenvalue index out of range");
  return structure.gaps[j];
}

MeanMatrixAnalysis analyze_mean_matrix(const Matrix& C, double cluster_tol) {
  MeanMatrixAnalysis out;
  out.C = C;
  out.primal = analyze_matrix(C, cluster_tol);
  out.adjoint = adjoint_structure(out.primal, C, cluster_tol);
  return out;
}

MeanMatrixAnalysis adjoint_view(const MeanMatrixAnalysis& mean) {
  // inner(v*, v) = conj(inner(v, v*)) = 1 already, so the primal vectors
  // serve unchanged as the duals of the adjoint ones.
  return {mean.C.adjoint(), mean.adjoint, mean.primal};
}

}  // namespace qpsl
