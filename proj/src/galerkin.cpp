#include "qpsl/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qpsl/errors.hpp"
#include "qpsl/linalg.hpp"
#include "qpsl/matrix_structure.hpp"

namespace qpsl {

namespace {

void check_quasimomentum(double t, double angle_tol) {
  if (!(t > 0.0) || !(t < kTwoPi) || t <= angle_tol ||
      std::abs(t - kPi) <= angle_tol || t >= kTwoPi - angle_tol)
    throw DegenerateQuasimomentumError(
        "quasimomentum t = " + std::to_string(t) +
        " is degenerate or outside (0, 2pi); needs distance > " +
        std::to_string(angle_tol) + " from {0, pi, 2pi}");
}

Matrix assemble_matrix(const PotentialSpec& spec, double t, int K) {
  const int m = spec.m;
  const int dim = m * (2 * K + 1);
  Matrix A = Matrix::Zero(dim, dim);
  std::vector<Matrix> qhat(2 * spec.max_harmonic + 1);
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu)
    qhat[nu + spec.max_harmonic] = fourier_block(spec, nu).block;
  for (int n = -K; n <= K; ++n) {
    const double w = kTwoPi * n + t;
    for (int p = std::max(-K, n - spec.max_harmonic);
         p <= std::min(K, n + spec.max_harmonic); ++p)
      A.block((n + K) * m, (p + K) * m, m, m) =
          qhat[n - p + spec.max_harmonic];
    A.block((n + K) * m, (n + K) * m, m, m) +=
        w * w * Matrix::Identity(m, m);
  }
  return A;
}

// Rotates so the largest-norm Fourier block has a real positive leading
// component; ties in block norm go to the lowest n.
void fix_phase(Vector& v, int K, int m) {
  int best = 0;
  double best_norm = -1.0;
  for (int b = 0; b < 2 * K + 1; ++b) {
    const double nb = v.segment(b * m, m).norm();
    if (nb > best_norm * (1.0 + 1e-12)) {
      best_norm = nb;
      best = b;
    }
  }
  for (int s = 0; s < m; ++s) {
    const Complex c = v(best * m + s);
    if (std::abs(c) > 1e-12) {
      v /= c / std::abs(c);
      return;
    }
  }
}

}  // namespace

TruncatedOperator assemble(const PotentialSpec& spec, double t, int K,
                           double angle_tol) {
  check_quasimomentum(t, angle_tol);
  if (K < spec.max_harmonic + 1)
    throw DimensionError("cutoff K = " + std::to_string(K) +
                         " must exceed the potential bandwidth V = " +
                         std::to_string(spec.max_harmonic));
  TruncatedOperator op;
  op.t = t;
  op.K = K;
  op.m = spec.m;
  op.V = spec.max_harmonic;
  op.potential = spec;
  op.matrix = assemble_matrix(spec, t, K);
  return op;
}

std::vector<EigenPair> eigen_solve(const TruncatedOperator& op, int max_dim) {
  const int dim = op.dim();
  if (dim > max_dim)
    throw ConfigError("truncated operator dimension " + std::to_string(dim) +
                      " exceeds the configured maximum " +
                      std::to_string(max_dim));
  EigenDecomposition eig;
  try {
    eig = dense_eigensolve(op.matrix);
  } catch (const SolverError& e) {
    throw SolverError(std::string(e.what()) + " (t = " + std::to_string(op.t) +
                      ", K = " + std::to_string(op.K) + ")");
  }

  std::vector<int> order(dim);
  for (int i = 0; i < dim; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex la = eig.values(a), lb = eig.values(b);
    if (la.real() != lb.real()) return la.real() < lb.real();
    return la.imag() < lb.imag();
  });

  std::vector<EigenPair> pairs(dim);
  Matrix vecs(dim, dim);
  for (int i = 0; i < dim; ++i) {
    Vector v = eig.vectors.col(order[i]);
    v /= v.norm();
    fix_phase(v, op.K, op.m);
    pairs[i].lambda = eig.values(order[i]);
    pairs[i].t = op.t;
    pairs[i].K = op.K;
    pairs[i].m = op.m;
    pairs[i].coefficients = v;
    vecs.col(i) = v;
  }

  // Residuals against the K+V truncation, all pairs in one product. The
  // padded vectors occupy the middle rows of the larger space.
  const int Kp = op.K + op.V;
  const Matrix big = assemble_matrix(op.potential, op.t, Kp);
  const int off = (Kp - op.K) * op.m;
  Matrix R = big.middleCols(off, dim) * vecs;
  for (int i = 0; i < dim; ++i)
    R.col(i).segment(off, dim) -= pairs[i].lambda * vecs.col(i);
  for (int i = 0; i < dim; ++i) pairs[i].residual = R.col(i).norm();
  return pairs;
}

double residual(const PotentialSpec& spec, const EigenPair& pair, int K_prime) {
  if (K_prime < pair.K + spec.max_harmonic)
    throw DimensionError("residual cutoff K' must be at least K + V");
  const Matrix big = assemble_matrix(spec, pair.t, K_prime);
  const int dim = pair.m * (2 * pair.K + 1);
  const int off = (K_prime - pair.K) * pair.m;
  Vector padded = Vector::Zero(pair.m * (2 * K_prime + 1));
  padded.segment(off, dim) = pair.coefficients;
  Vector r = big * padded - pair.lambda * padded;
  return r.norm();
}

Vector evaluate_eigenfunction(const EigenPair& pair, double x) {
  Vector value = Vector::Zero(pair.m);
  for (int n = -pair.K; n <= pair.K; ++n) {
    const Complex phase = std::polar(1.0, (kTwoPi * n + pair.t) * x);
    value += phase * pair.block(n);
  }
  return value;
}

std::vector<SweepRow> convergence_sweep(const PotentialSpec& spec, double t,
                                        const std::vector<int>& K_list,
                                        const std::vector<SweepTarget>& targets) {
  if (K_list.empty()) throw ConfigError("convergence sweep needs at least one K");
  for (size_t i = 1; i < K_list.size(); ++i)
    if (K_list[i] <= K_list[i - 1])
      throw ConfigError("convergence sweep K list must be strictly increasing");

  const EigenStructure mean = analyze_matrix(mean_matrix(spec));
  std::vector<SweepRow> rows;
  for (const SweepTarget& target : targets) {
    if (target.j < 0 || target.j >= mean.distinct_count())
      throw DimensionError("sweep target refers to a mean-matrix eigenvalue that does not exist");
    SweepRow row;
    row.target = target;
    const double w = kTwoPi * target.k + t;
    row.center = w * w + mean.distinct[target.j].mu;
    rows.push_back(row);
  }

  for (int K : K_list) {
    const auto pairs = eigen_solve(assemble(spec, t, K));
    // Match radius: half the distance to the nearest other unperturbed
    // center, so a drifting eigenvalue is reported rather than mislabeled.
    for (auto& row : rows) {
      if (std::abs(row.target.k) > K) {
        row.entries.push_back({K, Complex(0, 0), false, 0.0});
        continue;
      }
      double guard = std::numeric_limits<double>::infinity();
      for (int n = -K; n <= K; ++n) {
        const double wn = kTwoPi * n + t;
        for (int j = 0; j < mean.distinct_count(); ++j) {
          const Complex other = wn * wn + mean.distinct[j].mu;
          if (n == row.target.k && j == row.target.j) continue;
          guard = std::min(guard, std::abs(other - row.center));
        }
      }
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < pairs.size(); ++i) {
        const double dist = std::abs(pairs[i].lambda - row.center);
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(i);
        }
      }
      SweepEntry entry;
      entry.K = K;
      entry.lambda = pairs[best].lambda;
      entry.matched = best_dist <= 0.5 * guard;
      for (auto it = row.entries.rbegin(); it != row.entries.rend(); ++it)
        if (it->matched) {
          entry.diff = std::abs(entry.lambda - it->lambda);
          break;
        }
      row.entries.push_back(entry);
    }
  }

  for (auto& row : rows) {
    std::vector<double> diffs;
    for (size_t i = 1; i < row.entries.size(); ++i)
      if (row.entries[i].matched && row.entries[i].diff > 0.0)
        diffs.push_back(row.entries[i].diff);
    if (diffs.size() >= 2)
      row.cauchy = diffs.back() <= diffs.front() + 1e-12;
  }
  return rows;
}

}  // namespace qpsl
