#include "qpsl/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qpsl/errors.hpp"

namespace qpsl {

namespace {

constexpr double kExactErrorLevel = 1e-12;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

Complex coarse_predict(double t, int k) {
  const double w = kTwoPi * k + t;
  return Complex(w * w, 0.0);
}

double default_disk_rho(const PotentialSpec& spec) {
  return 10.0 * perturbation_l1_norm(spec);
}

std::vector<Prediction> predict(const MeanMatrixAnalysis& mean, double t,
                                const std::vector<int>& k_range, double rho) {
  if (rho < 0.0) throw std::invalid_argument("disk radius scale rho must be >= 0");
  std::vector<Prediction> out;
  for (int k : k_range) {
    const double width = std::log(std::abs(k) + 2.0) / (std::abs(k) + 1.0);
    for (int j = 0; j < mean.primal.distinct_count(); ++j) {
      const DistinctEigenvalue& dist = mean.primal.distinct[j];
      Prediction pred;
      pred.k = k;
      pred.j = j;
      pred.center = coarse_predict(t, k) + dist.mu;
      pred.multiplicity = dist.multiplicity;
      pred.max_chain_length = dist.max_chain_length;
      pred.gap = mean.primal.gaps[j];
      const double asymptotic =
          rho * std::pow(width, 1.0 / dist.max_chain_length);
      const double floor = 1e-8 * (1.0 + std::abs(pred.center));
      pred.disk_radius = std::min(pred.gap / 2.0, std::max(asymptotic, floor));
      if (dist.multiplicity == 1)
        pred.first_order_vector = dist.chains[0].eigenvector;
      for (const JordanChain& chain : dist.chains) {
        std::vector<Vector> depths;
        for (int r = 0; r < chain.length(); ++r) depths.push_back(chain.at(r));
        pred.chain_basis.push_back(std::move(depths));
      }
      for (const JordanChain& chain : mean.adjoint.distinct[j].chains) {
        std::vector<Vector> depths;
        for (int r = 0; r < chain.length(); ++r) depths.push_back(chain.at(r));
        pred.adjoint_chains.push_back(std::move(depths));
      }
      out.push_back(std::move(pred));
    }
  }
  return out;
}

namespace {

struct DpState {
  int count = -1;  // -1 marks unreachable
  double cost = 0.0;
};

bool better(const DpState& a, const DpState& b) {
  if (a.count != b.count) return a.count > b.count;
  return a.cost < b.cost;
}

// Exact max-cardinality min-cost assignment of the component's eigenvalues
// to prediction slots; slot subsets are enumerated (components are tiny,
// one k-cluster each).
void solve_component_exact(const std::vector<int>& comp_preds,
                           const std::vector<int>& comp_eigs,
                           const std::vector<Prediction>& preds,
                           const std::vector<EigenPair>& pairs,
                           const std::vector<std::vector<int>>& cand,
                           std::vector<int>& eig_to_pred) {
  std::vector<int> slot_offset(comp_preds.size());
  int total_slots = 0;
  for (size_t i = 0; i < comp_preds.size(); ++i) {
    slot_offset[i] = total_slots;
    total_slots += preds[comp_preds[i]].multiplicity;
  }
  const int masks = 1 << total_slots;
  const int ne = static_cast<int>(comp_eigs.size());

  std::vector<DpState> dp(masks);
  dp[0] = {0, 0.0};
  // back[e][mask]: local prediction index the e-th eigenvalue was assigned
  // to (-1 = skipped) on the best path reaching `mask` after step e.
  std::vector<std::vector<int>> back(ne, std::vector<int>(masks, -2));

  for (int e = 0; e < ne; ++e) {
    std::vector<DpState> next(masks);
    std::vector<int>& decision = back[e];
    for (int mask = 0; mask < masks; ++mask) {
      if (dp[mask].count < 0) continue;
      if (better(dp[mask], next[mask])) {
        next[mask] = dp[mask];
        decision[mask] = -1;
      }
      for (int cp : cand[comp_eigs[e]]) {
        const auto it = std::find(comp_preds.begin(), comp_preds.end(), cp);
        const int local = static_cast<int>(it - comp_preds.begin());
        int slot = -1;
        for (int s = 0; s < preds[cp].multiplicity; ++s)
          if (!(mask & (1 << (slot_offset[local] + s)))) {
            slot = slot_offset[local] + s;
            break;
          }
        if (slot < 0) continue;
        const int nm = mask | (1 << slot);
        const DpState candidate{
            dp[mask].count + 1,
            dp[mask].cost +
                std::abs(pairs[comp_eigs[e]].lambda - preds[cp].center)};
        if (better(candidate, next[nm])) {
          next[nm] = candidate;
          decision[nm] = local;
        }
      }
    }
    dp = std::move(next);
  }

  int best_mask = 0;
  for (int mask = 1; mask < masks; ++mask)
    if (better(dp[mask], dp[best_mask])) best_mask = mask;

  int mask = best_mask;
  for (int e = ne - 1; e >= 0; --e) {
    const int local = back[e][mask];
    if (local >= 0) {
      const int cp = comp_preds[local];
      eig_to_pred[comp_eigs[e]] = cp;
      // Slots fill lowest-first going forward, so the slot this eigenvalue
      // occupied is the highest one currently set for cp.
      int slot = -1;
      for (int s = preds[cp].multiplicity - 1; s >= 0; --s)
        if (mask & (1 << (slot_offset[local] + s))) {
          slot = slot_offset[local] + s;
          break;
        }
      mask &= ~(1 << slot);
    }
  }
}

void solve_component_greedy(const std::vector<int>& comp_preds,
                            const std::vector<int>& comp_eigs,
                            const std::vector<Prediction>& preds,
                            const std::vector<EigenPair>& pairs,
                            const std::vector<std::vector<int>>& cand,
                            std::vector<int>& eig_to_pred) {
  struct Edge {
    double dist;
    int eig;
    int pred;
  };
  std::vector<Edge> edges;
  for (int e : comp_eigs)
    for (int p : cand[e])
      edges.push_back({std::abs(pairs[e].lambda - preds[p].center), e, p});
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.dist < b.dist; });
  std::vector<int> capacity(preds.size(), 0);
  for (int p : comp_preds) capacity[p] = preds[p].multiplicity;
  for (const Edge& edge : edges) {
    if (eig_to_pred[edge.eig] >= 0 || capacity[edge.pred] == 0) continue;
    eig_to_pred[edge.eig] = edge.pred;
    --capacity[edge.pred];
  }
}

}  // namespace

const Assignment* PairingReport::find(int k, int j) const {
  for (const Assignment& a : assignments) {
    const Prediction& p = predictions[a.prediction_index];
    if (p.k == k && p.j == j) return &a;
  }
  return nullptr;
}

PairingReport pair_eigenvalues(const std::vector<EigenPair>& pairs,
                               const std::vector<Prediction>& predictions) {
  PairingReport report;
  report.predictions = predictions;
  const int np = static_cast<int>(predictions.size());
  const int ne = static_cast<int>(pairs.size());

  report.overlap_flags.assign(np, 0);
  for (int a = 0; a < np; ++a)
    for (int b = a + 1; b < np; ++b)
      if (std::abs(predictions[a].center - predictions[b].center) <
          predictions[a].disk_radius + predictions[b].disk_radius) {
        report.overlap_flags[a] = 1;
        report.overlap_flags[b] = 1;
      }

  std::vector<std::vector<int>> cand(ne);
  for (int e = 0; e < ne; ++e)
    for (int p = 0; p < np; ++p)
      if (std::abs(pairs[e].lambda - predictions[p].center) <=
          predictions[p].disk_radius)
        cand[e].push_back(p);

  // Components over predictions, linked through shared candidate eigenvalues.
  std::vector<int> parent(np);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find_root = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int e = 0; e < ne; ++e)
    for (size_t i = 1; i < cand[e].size(); ++i)
      parent[find_root(cand[e][0])] = find_root(cand[e][i]);

  std::vector<std::vector<int>> comp_preds_of(np), comp_eigs_of(np);
  for (int p = 0; p < np; ++p) comp_preds_of[find_root(p)].push_back(p);
  for (int e = 0; e < ne; ++e)
    if (!cand[e].empty()) comp_eigs_of[find_root(cand[e][0])].push_back(e);

  std::vector<int> eig_to_pred(ne, -1);
  for (int root = 0; root < np; ++root) {
    if (comp_eigs_of[root].empty()) continue;
    int slots = 0;
    for (int p : comp_preds_of[root]) slots += predictions[p].multiplicity;
    if (slots <= 14)
      solve_component_exact(comp_preds_of[root], comp_eigs_of[root],
                            predictions, pairs, cand, eig_to_pred);
    else
      solve_component_greedy(comp_preds_of[root], comp_eigs_of[root],
                             predictions, pairs, cand, eig_to_pred);
  }

  std::vector<std::vector<int>> members(np);
  for (int e = 0; e < ne; ++e) {
    if (eig_to_pred[e] >= 0)
      members[eig_to_pred[e]].push_back(e);
    else
      report.unmatched_eigenvalues.push_back(e);
  }
  for (int p = 0; p < np; ++p) {
    if (members[p].empty()) {
      report.unmatched_predictions.push_back(p);
      continue;
    }
    Assignment a;
    a.prediction_index = p;
    a.pair_indices = members[p];
    a.full = static_cast<int>(members[p].size()) == predictions[p].multiplicity;
    for (int e : members[p])
      a.max_distance = std::max(
          a.max_distance, std::abs(pairs[e].lambda - predictions[p].center));
    for (size_t x = 0; x < members[p].size(); ++x)
      for (size_t y = x + 1; y < members[p].size(); ++y)
        a.cluster_width = std::max(
            a.cluster_width,
            std::abs(pairs[members[p][x]].lambda - pairs[members[p][y]].lambda));
    a.eigenvalue_error = a.max_distance;
    a.eigenfunction_error =
        (a.full && predictions[p].multiplicity == 1)
            ? eigenfunction_error(pairs[members[p][0]], predictions[p])
            : nan_value();
    report.assignments.push_back(std::move(a));
  }
  return report;
}

DecayFit decay_fit(const std::vector<std::pair<int, double>>& errors,
                   DecayModel model, int k_min) {
  DecayFit fit;
  std::vector<std::pair<int, double>> pooled;  // by |k|, larger error wins
  for (const auto& [k, e] : errors) {
    const int a = std::abs(k);
    if (a < k_min) continue;
    auto it = std::find_if(pooled.begin(), pooled.end(),
                           [a](const auto& q) { return q.first == a; });
    if (it == pooled.end())
      pooled.push_back({a, e});
    else
      it->second = std::max(it->second, e);
  }
  fit.points = static_cast<int>(pooled.size());
  if (pooled.empty()) return fit;

  double max_e = 0.0;
  for (const auto& [k, e] : pooled) max_e = std::max(max_e, e);
  if (max_e < kExactErrorLevel) {
    fit.exact = true;
    fit.valid = true;
    return fit;
  }

  std::vector<double> xs, ys;
  for (const auto& [k, e] : pooled) {
    if (e <= 0.0) continue;
    const double x = model == DecayModel::lnk_over_k
                         ? std::log(std::log(static_cast<double>(k)) / k)
                         : std::log(static_cast<double>(k));
    xs.push_back(x);
    ys.push_back(std::log(e));
  }
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 5) return fit;

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.exponent = sxy / sxx;
  fit.r2 = syy > 1e-30 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.valid = true;
  return fit;
}

double eigenfunction_error(const EigenPair& pair, const Prediction& prediction) {
  if (prediction.multiplicity != 1)
    throw std::invalid_argument(
        "eigenfunction error needs a simple mean-matrix eigenvalue");
  if (std::abs(prediction.k) > pair.K)
    throw DimensionError("prediction index lies outside the truncation");
  const Complex overlap =
      inner(pair.block(prediction.k), prediction.first_order_vector);
  // || Psi - alpha v e_k ||^2 summed blockwise; subtracting unit-scale
  // overlaps from 2 instead would wipe out everything below sqrt(eps)
  const Complex alpha =
      std::abs(overlap) == 0.0 ? Complex(1.0) : overlap / std::abs(overlap);
  double sum = (pair.block(prediction.k) - alpha * prediction.first_order_vector)
                   .squaredNorm();
  for (int n = -pair.K; n <= pair.K; ++n) {
    if (n == prediction.k) continue;
    sum += pair.block(n).squaredNorm();
  }
  return std::sqrt(sum);
}

double projection_deficit(const EigenPair& pair, int k) {
  if (std::abs(k) > pair.K)
    throw DimensionError("projection index lies outside the truncation");
  const double norm2 = pair.block(k).squaredNorm();
  return std::abs(norm2 - 1.0);
}

Vector perturbed_block(const PotentialSpec& spec, const EigenPair& pair, int k) {
  Vector w = Vector::Zero(pair.m);
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu) {
    if (nu == 0) continue;
    const int p = k - nu;
    if (std::abs(p) > pair.K) continue;
    w += fourier_block(spec, nu).block * pair.block(p);
  }
  return w;
}

double perturbation_residual(const EigenPair& pair, const Prediction& prediction,
                             const PotentialSpec& spec, int s, int chain) {
  if (chain < 0 || chain >= static_cast<int>(prediction.adjoint_chains.size()))
    throw DimensionError("adjoint chain index out of range");
  const auto& depths = prediction.adjoint_chains[chain];
  if (s < 0 || s >= static_cast<int>(depths.size()))
    throw DimensionError("chain depth exceeds the adjoint chain length");
  const Vector ck = pair.block(prediction.k);
  const Vector w = perturbed_block(spec, pair, prediction.k);
  const Complex del = pair.lambda - prediction.center;
  const Complex lhs = std::pow(del, s + 1) * inner(ck, depths[s]);
  Complex rhs(0, 0);
  for (int p = 0; p <= s; ++p)
    rhs += std::pow(del, p) * inner(w, depths[p]);
  return std::abs(lhs - rhs);
}

Lemma2Table lemma2_decay(const std::vector<KPair>& pairs_by_k,
                         const PotentialSpec& spec,
                         const EigenStructure& adjoint, int i, int p) {
  if (i < 0 || i >= adjoint.distinct_count())
    throw DimensionError("adjoint eigenvalue index out of range");
  const JordanChain& chain = adjoint.distinct[i].chains[0];
  if (p < 0 || p >= chain.length())
    throw DimensionError("chain depth exceeds the adjoint chain length");
  Lemma2Table table;
  table.i = i;
  table.p = p;
  for (const KPair& kp : pairs_by_k) {
    const Vector w = perturbed_block(spec, kp.pair, kp.k);
    table.values.push_back({kp.k, std::abs(inner(w, chain.at(p)))});
  }
  table.fit = decay_fit(table.values, DecayModel::lnk_over_k);
  return table;
}

double lemma3_floor(const EigenPair& pair, const EigenStructure& adjoint, int k) {
  if (std::abs(k) > pair.K)
    throw DimensionError("block index lies outside the truncation");
  const Vector ck = pair.block(k);
  double floor = 0.0;
  for (const FlatEntry& entry : adjoint.flat)
    floor = std::max(floor, std::abs(inner(ck, entry.vector)));
  return floor;
}

double fourier_relation_residual(const EigenPair& pair, const PotentialSpec& spec,
                                 int n, int s) {
  if (std::abs(n) > pair.K || s < 0 || s >= pair.m)
    throw DimensionError("Fourier relation index out of range");
  const double wn = kTwoPi * n + pair.t;
  const Complex denom = pair.lambda - wn * wn;
  if (std::abs(denom) <= 1e-8)
    throw std::invalid_argument(
        "near-resonant Fourier row: |lambda - (2pi n+t)^2| <= 1e-8");
  Complex rhs(0, 0);
  for (int nu = -spec.max_harmonic; nu <= spec.max_harmonic; ++nu) {
    const int p = n - nu;
    if (std::abs(p) > pair.K) continue;
    rhs += (fourier_block(spec, nu).block * pair.block(p))(s);
  }
  return std::abs(denom * pair.block(n)(s) - rhs);
}

std::vector<std::pair<int, double>> eigenvalue_error_table(const PairingReport& report,
                                                           int j) {
  std::vector<std::pair<int, double>> out;
  for (const Assignment& a : report.assignments) {
    const Prediction& p = report.predictions[a.prediction_index];
    if (p.j == j && a.full) out.push_back({p.k, a.eigenvalue_error});
  }
  return out;
}

std::vector<std::pair<int, double>> eigenfunction_error_table(const PairingReport& report,
                                                              int j) {
  std::vector<std::pair<int, double>> out;
  for (const Assignment& a : report.assignments) {
    const Prediction& p = report.predictions[a.prediction_index];
    if (p.j == j && a.full && std::isfinite(a.eigenfunction_error))
      out.push_back({p.k, a.eigenfunction_error});
  }
  return out;
}

std::vector<KPair> paired_by_k(const PairingReport& report,
                               const std::vector<EigenPair>& pairs, int j) {
  std::vector<KPair> out;
  for (const Assignment& a : report.assignments) {
    const Prediction& p = report.predictions[a.prediction_index];
    if (p.j == j && a.full && p.multiplicity == 1)
      out.push_back({p.k, pairs[a.pair_indices[0]]});
  }
  return out;
}

}  // namespace qpsl
