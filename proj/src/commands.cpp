#include "qpsl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qpsl/bands.hpp"
#include "qpsl/errors.hpp"
#include "qpsl/matrix_structure.hpp"
#include "qpsl/potential.hpp"
#include "qpsl/regularity.hpp"
#include "qpsl/riesz.hpp"

namespace qpsl {
namespace {

// Prefixes any failure with the pipeline stage that raised it.
template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const std::exception& e) {
    throw Error("stage '" + std::string(name) + "': " + e.what());
  }
}

std::string config_echo(const RunConfig& c) {
  std::ostringstream os;
  os << "potential=" << (c.potential_path.empty() ? "-" : c.potential_path)
     << " t=" << format_value(c.t) << " k_max=" << c.k_max
     << " k_min=" << c.k_min << " K=" << c.cutoff
     << " rho=" << format_value(c.rho) << " seed=" << c.seed;
  return os.str();
}

std::vector<int> full_range(int k_max) {
  std::vector<int> ks;
  for (int k = -k_max; k <= k_max; ++k) ks.push_back(k);
  return ks;
}

// Uniform double in [0, 1) from the raw engine stream; the distribution
// classes are not bit-stable across standard libraries.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

PotentialSpec load_stage(const RunConfig& config) {
  return stage("load_potential", [&] {
    if (config.potential_path.empty()) {
      throw ConfigError("a potential file is required (--potential)");
    }
    return load_potential(config.potential_path, config.drop_tol);
  });
}

int resolve_cutoff(const RunConfig& config, const PotentialSpec& spec) {
  return config.cutoff > 0 ? config.cutoff
                           : default_cutoff(config.k_max, spec.max_harmonic);
}

struct SolveContext {
  PotentialSpec spec;
  MeanMatrixAnalysis mean;
  int K = 0;
  double rho = 0.0;
  TruncatedOperator op;
  std::vector<EigenPair> pairs;
  PairingReport report;
};

SolveContext solve_pipeline(const RunConfig& config, PotentialSpec spec,
                            int K) {
  SolveContext ctx;
  ctx.spec = std::move(spec);
  ctx.mean = stage("mean_analysis", [&] {
    return analyze_mean_matrix(mean_matrix(ctx.spec), config.cluster_tol);
  });
  ctx.K = K;
  ctx.rho = config.rho > 0 ? config.rho : default_disk_rho(ctx.spec);
  ctx.op = stage("assemble", [&] {
    return assemble(ctx.spec, config.t, ctx.K, config.angle_tol);
  });
  ctx.pairs = stage("eigen_solve", [&] { return eigen_solve(ctx.op); });
  const auto predictions = stage("predict", [&] {
    return predict(ctx.mean, config.t, full_range(config.k_max), ctx.rho);
  });
  ctx.report = stage("pair_eigenvalues",
                     [&] { return pair_eigenvalues(ctx.pairs, predictions); });
  return ctx;
}

SolveContext solve_pipeline(const RunConfig& config) {
  PotentialSpec spec = load_stage(config);
  const int K = resolve_cutoff(config, spec);
  return solve_pipeline(config, std::move(spec), K);
}

const char* model_name(DecayModel model) {
  return model == DecayModel::lnk_over_k ? "lnk_over_k" : "k_pow";
}

void add_decay_rows(Table& table, const PairingReport& report, int j,
                    double t, int K, int k_min) {
  for (DecayModel model : {DecayModel::lnk_over_k, DecayModel::k_pow}) {
    const DecayFit fit = decay_fit(eigenvalue_error_table(report, j), model,
                                   k_min);
    table.add_row(j, model_name(model), t, K, fit.exponent, fit.r2,
                  static_cast<int>(fit.exact), static_cast<int>(fit.valid),
                  fit.points);
  }
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.k_min < 1) throw ConfigError("k_min must be >= 1");
  if (config.k_max <= config.k_min) {
    throw ConfigError("k_max must exceed k_min");
  }
  if (config.angle_tol <= 0.0 || config.drop_tol <= 0.0) {
    throw ConfigError("angle_tol and drop_tol must be positive");
  }
  if (config.cluster_tol < 0.0) {
    throw ConfigError("cluster_tol must be positive, or 0 for the default");
  }
  if (config.m < 1) throw ConfigError("m must be at least 1");
  if (config.t_points < 2) throw ConfigError("t_points must be at least 2");
  if (!(config.window_lo < config.window_hi)) {
    throw ConfigError("window_lo must lie below window_hi");
  }
}

Report cmd_spectrum(const RunConfig& config) {
  validate(config);
  Report report("spectrum");
  report.set_config_echo(config_echo(config));
  SolveContext ctx = solve_pipeline(config);

  Table& eigs = report.add_table(
      "eigenvalues", {"k", "j", "t", "K", "re_lambda", "im_lambda", "residual",
                      "re_center", "im_center", "error"});
  for (const Assignment& a : ctx.report.assignments) {
    const Prediction& p = ctx.report.predictions[a.prediction_index];
    for (int e : a.pair_indices) {
      const EigenPair& pair = ctx.pairs[e];
      eigs.add_row(p.k, p.j, config.t, ctx.K, pair.lambda.real(),
                   pair.lambda.imag(), pair.residual, p.center.real(),
                   p.center.imag(), std::abs(pair.lambda - p.center));
    }
  }

  Table& pairing = report.add_table(
      "pairing", {"k", "j", "t", "K", "multiplicity", "matched", "full",
                  "disk_radius", "max_distance", "cluster_width", "overlap"});
  std::vector<const Assignment*> by_prediction(ctx.report.predictions.size(),
                                               nullptr);
  for (const Assignment& a : ctx.report.assignments) {
    by_prediction[a.prediction_index] = &a;
  }
  int studied = 0;
  int studied_full = 0;
  for (std::size_t p = 0; p < ctx.report.predictions.size(); ++p) {
    const Prediction& pred = ctx.report.predictions[p];
    const Assignment* a = by_prediction[p];
    pairing.add_row(pred.k, pred.j, config.t, ctx.K, pred.multiplicity,
                    a ? static_cast<int>(a->pair_indices.size()) : 0,
                    a && a->full ? 1 : 0, pred.disk_radius,
                    a ? a->max_distance : 0.0, a ? a->cluster_width : 0.0,
                    static_cast<int>(ctx.report.overlap_flags[p]));
    if (std::abs(pred.k) >= config.k_min) {
      ++studied;
      if (a && a->full) ++studied_full;
    }
  }

  Table& decay = report.add_table(
      "decay", {"j", "model", "t", "K", "exponent", "r2", "exact", "valid",
                "points"});
  for (int j = 0; j < ctx.mean.primal.distinct_count(); ++j) {
    add_decay_rows(decay, ctx.report, j, config.t, ctx.K, config.k_min);
  }

  {
    std::ostringstream detail;
    detail << studied_full << "/" << studied << " disks with |k| >= "
           << config.k_min << " fully matched, "
           << ctx.report.unmatched_eigenvalues.size()
           << " eigenvalues outside all disks";
    report.add_verdict("pairing_complete", studied_full == studied,
                       detail.str());
  }
  if (ctx.spec.max_harmonic == 0) {
    double worst = 0.0;
    for (const Assignment& a : ctx.report.assignments) {
      const Prediction& p = ctx.report.predictions[a.prediction_index];
      worst = std::max(worst,
                       a.max_distance / (1.0 + std::abs(p.center)));
    }
    std::ostringstream detail;
    detail << "max relative eigenvalue error " << format_value(worst);
    report.add_verdict("exact (constant potential)", worst <= 1e-8,
                       detail.str());
  }
  return report;
}

Report cmd_verify(const RunConfig& config) {
  validate(config);
  Report report("verify");
  report.set_config_echo(config_echo(config));

  PotentialSpec spec = load_stage(config);
  const int K = resolve_cutoff(config, spec);
  const int needed = 2 * config.k_max + spec.max_harmonic;
  if (K < needed) {
    std::ostringstream msg;
    msg << "cutoff K=" << K << " is below the rule K >= 2*k_max + V = "
        << needed << "; raise --cutoff or lower --k-max";
    throw ConfigError(msg.str());
  }
  SolveContext ctx = solve_pipeline(config, std::move(spec), K);
  const int V = ctx.spec.max_harmonic;

  Table& pert = report.add_table(
      "perturbation_identity",
      {"k", "j", "t", "K", "s", "residual", "bound", "pass"});
  bool p0_ok = true;
  bool chain_ok = true;
  bool chain_rows = false;
  for (const Assignment& a : ctx.report.assignments) {
    const Prediction& p = ctx.report.predictions[a.prediction_index];
    const int depths = p.adjoint_chains.empty()
                           ? 0
                           : static_cast<int>(p.adjoint_chains[0].size());
    for (int e : a.pair_indices) {
      const EigenPair& pair = ctx.pairs[e];
      for (int s = 0; s < depths; ++s) {
        const double value = perturbation_residual(pair, p, ctx.spec, s);
        const double bound = 10.0 * pair.residual;
        const bool pass = value <= bound;
        pert.add_row(p.k, p.j, config.t, ctx.K, s, value, bound,
                     static_cast<int>(pass));
        if (s == 0) {
          p0_ok = p0_ok && pass;
        } else {
          chain_rows = true;
          chain_ok = chain_ok && pass;
        }
      }
    }
  }

  Table& fourier = report.add_table(
      "fourier_relation", {"k", "j", "t", "K", "n_worst", "s_worst",
                           "max_residual", "bound", "pass"});
  bool fourier_ok = true;
  for (const Assignment& a : ctx.report.assignments) {
    const Prediction& p = ctx.report.predictions[a.prediction_index];
    for (int e : a.pair_indices) {
      const EigenPair& pair = ctx.pairs[e];
      double worst = 0.0;
      int n_worst = 0;
      int s_worst = 0;
      for (int n = -(ctx.K - V); n <= ctx.K - V; ++n) {
        const double wn = kTwoPi * n + pair.t;
        if (std::abs(pair.lambda - wn * wn) <= 1e-8) continue;
        for (int s = 0; s < pair.m; ++s) {
          const double r = fourier_relation_residual(pair, ctx.spec, n, s);
          if (r > worst) {
            worst = r;
            n_worst = n;
            s_worst = s;
          }
        }
      }
      const double bound = pair.residual + 1e-13;
      const bool pass = worst <= bound;
      fourier.add_row(p.k, p.j, config.t, ctx.K, n_worst, s_worst, worst,
                      bound, static_cast<int>(pass));
      fourier_ok = fourier_ok && pass;
    }
  }

  Table& deficit = report.add_table(
      "projection_deficit",
      {"k", "j", "t", "K", "deficit", "deficit_k2"});
  double at8 = 0.0;
  double beyond16 = 0.0;
  bool has8 = false;
  bool has16 = false;
  for (const Assignment& a : ctx.report.assignments) {
    const Prediction& p = ctx.report.predictions[a.prediction_index];
    for (int e : a.pair_indices) {
      const double d = projection_deficit(ctx.pairs[e], p.k);
      const double dk2 = d * static_cast<double>(p.k) * p.k;
      deficit.add_row(p.k, p.j, config.t, ctx.K, d, dk2);
      if (std::abs(p.k) == 8) {
        at8 = std::max(at8, dk2);
        has8 = true;
      }
      if (std::abs(p.k) >= 16) {
        beyond16 = std::max(beyond16, dk2);
        has16 = true;
      }
    }
  }

  Table& coupling = report.add_table(
      "coupling_decay",
      {"i", "p", "t", "K", "exponent", "r2", "valid", "points"});
  for (int i = 0; i < ctx.mean.adjoint.distinct_count(); ++i) {
    const auto by_k = paired_by_k(ctx.report, ctx.pairs, i);
    const int len = ctx.mean.adjoint.distinct[i].chains[0].length();
    for (int p = 0; p < len; ++p) {
      const Lemma2Table tab = lemma2_decay(by_k, ctx.spec, ctx.mean.adjoint,
                                           i, p);
      coupling.add_row(i, p, config.t, ctx.K, tab.fit.exponent, tab.fit.r2,
                       static_cast<int>(tab.fit.valid), tab.fit.points);
    }
  }

  Table& floors = report.add_table(
      "projection_floor", {"k", "j", "t", "K", "floor"});
  double min_floor = 1.0;
  bool floor_rows = false;
  for (const Assignment& a : ctx.report.assignments) {
    const Prediction& p = ctx.report.predictions[a.prediction_index];
    for (int e : a.pair_indices) {
      const double f = lemma3_floor(ctx.pairs[e], ctx.mean.adjoint, p.k);
      floors.add_row(p.k, p.j, config.t, ctx.K, f);
      if (std::abs(p.k) >= config.k_min) {
        min_floor = std::min(min_floor, f);
        floor_rows = true;
      }
    }
  }

  report.add_verdict("perturbation_identity_p0", p0_ok);
  if (chain_rows) {
    report.add_verdict("perturbation_identity_chain", chain_ok);
  }
  report.add_verdict("fourier_relation", fourier_ok);
  if (has8 && has16) {
    std::ostringstream detail;
    detail << "max deficit*k^2 over |k|>=16 is " << format_value(beyond16)
           << " vs " << format_value(at8) << " at |k|=8";
    report.add_verdict("deficit_trend", beyond16 <= 4.0 * at8 + 1e-12,
                       detail.str());
  }
  if (floor_rows) {
    std::ostringstream detail;
    detail << "min projection floor " << format_value(min_floor);
    report.add_verdict("projection_floor", min_floor >= 0.1, detail.str());
  }
  return report;
}

Report cmd_regularity(const RunConfig& config) {
  validate(config);
  Report report("regularity");
  report.set_config_echo(config_echo(config));

  std::vector<double> ts = config.t_list;
  if (ts.empty()) {
    ts = {0.3, 0.7, 1.0, kPi / 2, 2.0, 2.5, 3.0, kPi, 4.0, 5.5};
  }
  const int m_hi = std::max(4, config.m);

  Table& theta = report.add_table(
      "theta", {"m", "t", "re_theta_minus", "im_theta_minus", "re_theta_plus",
                "im_theta_plus", "product_defect", "regular", "note"});
  double product_defect = 0.0;
  bool all_regular = true;
  for (int m = 1; m <= m_hi; ++m) {
    for (double t : ts) {
      const RegularityReport r = is_regular(m, t);
      const double defect = std::abs(r.theta_minus * r.theta_plus - 1.0);
      product_defect = std::max(product_defect, defect);
      all_regular = all_regular && r.regular;
      theta.add_row(m, t, r.theta_minus.real(), r.theta_minus.imag(),
                    r.theta_plus.real(), r.theta_plus.imag(), defect,
                    static_cast<int>(r.regular),
                    r.roots_distinct ? std::string("")
                                     : std::string("roots coincide"));
    }
  }

  Table& equivalence = report.add_table(
      "equivalence", {"m", "samples", "max_rel_deviation"});
  std::mt19937_64 rng(config.seed);
  double overall_dev = 0.0;
  for (int m = 1; m <= m_hi; ++m) {
    double dev = 0.0;
    const int samples = 100;
    for (int i = 0; i < samples; ++i) {
      const double t = 0.05 + canonical(rng) * (kTwoPi - 0.1);
      const double radius = 0.5 + 1.5 * canonical(rng);
      const double phase = kTwoPi * canonical(rng);
      const Complex s = radius * Complex(std::cos(phase), std::sin(phase));
      const DeterminantEvaluation d = evaluate_determinant(m, t, s);
      dev = std::max(dev, std::abs(d.direct - d.closed) /
                              (1.0 + std::abs(d.closed)));
    }
    overall_dev = std::max(overall_dev, dev);
    equivalence.add_row(m, samples, dev);
  }

  Table& mult = report.add_table(
      "root_multiplicity", {"m", "t", "root", "order", "expected", "pass"});
  bool mult_ok = true;
  for (int m = 1; m <= m_hi; ++m) {
    for (double t : ts) {
      const bool distinct = is_regular(m, t).roots_distinct;
      const int expected = distinct ? m : 2 * m;
      for (int sign : {+1, -1}) {
        const Complex root(std::cos(sign * t), std::sin(sign * t));
        const int order = root_multiplicity(m, t, root);
        const bool pass = order == expected;
        mult_ok = mult_ok && pass;
        mult.add_row(m, t, sign > 0 ? "e^{+it}" : "e^{-it}", order, expected,
                     static_cast<int>(pass));
        if (!distinct) break;  // the two roots coincide, one row suffices
      }
    }
  }

  {
    std::ostringstream detail;
    detail << "max |direct - closed| / (1 + |closed|) = "
           << format_value(overall_dev);
    report.add_verdict("closed_form_equivalence", overall_dev <= 1e-10,
                       detail.str());
  }
  {
    std::ostringstream detail;
    detail << "max |theta_m * theta_{-m} - 1| = " << format_value(product_defect);
    report.add_verdict("theta_product", product_defect <= 1e-12, detail.str());
  }
  report.add_verdict("boundary_conditions_regular", all_regular);
  report.add_verdict("root_multiplicity", mult_ok);
  return report;
}

Report cmd_riesz(const RunConfig& config) {
  validate(config);
  Report report("riesz");
  report.set_config_echo(config_echo(config));

  PotentialSpec spec = load_stage(config);
  const int K = resolve_cutoff(config, spec);
  const MeanMatrixAnalysis mean = stage("mean_analysis", [&] {
    return analyze_mean_matrix(mean_matrix(spec), config.cluster_tol);
  });
  const double rho = config.rho > 0 ? config.rho : default_disk_rho(spec);

  const TruncatedOperator op = stage("assemble", [&] {
    return assemble(spec, config.t, K, config.angle_tol);
  });
  const TruncatedOperator op_star = stage("assemble_adjoint", [&] {
    return assemble(adjoint_spec(spec), config.t, K, config.angle_tol);
  });
  const auto pairs = stage("eigen_solve", [&] { return eigen_solve(op); });
  const auto pairs_star =
      stage("eigen_solve_adjoint", [&] { return eigen_solve(op_star); });

  const auto range = full_range(config.k_max);
  const auto preds =
      stage("predict", [&] { return predict(mean, config.t, range, rho); });
  const auto preds_star = stage("predict_adjoint", [&] {
    return predict(adjoint_view(mean), config.t, range, rho);
  });
  const PairingReport pairing = stage(
      "pair_eigenvalues", [&] { return pair_eigenvalues(pairs, preds); });
  const PairingReport pairing_star = stage("pair_eigenvalues_adjoint", [&] {
    return pair_eigenvalues(pairs_star, preds_star);
  });

  const SimplicityReport simplicity = stage("simplicity_certificate", [&] {
    return simplicity_certificate(pairing, pairs, config.k_min);
  });
  Table& simple = report.add_table(
      "simplicity", {"k", "j", "t", "K", "eigenvalues_in_disk", "separation",
                     "threshold", "certified"});
  for (const SimplicityEntry& entry : simplicity.entries) {
    simple.add_row(entry.k, entry.j, config.t, K, entry.eigenvalues_in_disk,
                   entry.separation, entry.threshold,
                   static_cast<int>(entry.certified));
  }

  const BiorthogonalFamily family = stage("build_biorthogonal", [&] {
    return build_biorthogonal(op, op_star, pairs, pairs_star, pairing,
                              pairing_star, config.k_min, config.k_max);
  });
  const auto frame = stage("riesz_condition_estimate",
                           [&] { return riesz_condition_estimate(family); });
  const auto dual = stage("dual_frame_estimate",
                          [&] { return dual_frame_estimate(family); });
  Table& bounds = report.add_table(
      "frame_bounds", {"family", "t", "K", "members", "lower", "upper"});
  const int members = static_cast<int>(family.members.size());
  bounds.add_row("psi", config.t, K, members, frame.first, frame.second);
  bounds.add_row("chi", config.t, K, members, dual.first, dual.second);

  std::set<int> reports = {config.k_min, config.k_max};
  for (int q = 1; q < 4; ++q) {
    const int K_report = config.k_max * q / 4;
    if (K_report >= config.k_min) reports.insert(K_report);
  }
  const std::vector<int> K_report(reports.begin(), reports.end());

  Table& bari = report.add_table(
      "bari_sums", {"f", "K_report", "t", "K", "sum_psi", "sum_chi"});
  bool monotone = true;
  bool bounded = true;
  bool tail_ok = true;
  const double cap_psi = frame.second * 1.01;
  const double cap_chi = dual.second * 1.01;
  const int support = std::max(2, config.k_max / 2);
  const int n_functions = 20;
  for (int f_index = 0; f_index < n_functions; ++f_index) {
    const Vector f = random_test_function(
        K, op.m, support, static_cast<unsigned>(config.seed + f_index));
    const auto rows = bari_partial_sums(f, family, K_report);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      bari.add_row(f_index, rows[r].K_report, config.t, K, rows[r].sum_psi,
                   rows[r].sum_chi);
      if (r > 0) {
        monotone = monotone && rows[r].sum_psi >= rows[r - 1].sum_psi - 1e-14;
        monotone = monotone && rows[r].sum_chi >= rows[r - 1].sum_chi - 1e-14;
      }
      bounded = bounded && rows[r].sum_psi <= cap_psi &&
                rows[r].sum_chi <= cap_chi;
    }
    if (rows.size() >= 2) {
      const auto& last = rows[rows.size() - 1];
      const auto& prev = rows[rows.size() - 2];
      tail_ok = tail_ok && last.sum_psi - prev.sum_psi <= 1e-3 &&
                last.sum_chi - prev.sum_chi <= 1e-3;
    }
  }

  {
    std::ostringstream detail;
    detail << simplicity.violations << " disk violations over "
           << simplicity.entries.size() << " disks";
    report.add_verdict("one_eigenvalue_per_disk", simplicity.violations == 0,
                       detail.str());
  }
  report.add_verdict("bari_sums_monotone", monotone);
  {
    std::ostringstream detail;
    detail << "caps psi " << format_value(cap_psi) << ", chi "
           << format_value(cap_chi);
    report.add_verdict("bari_sums_bounded", bounded, detail.str());
  }
  report.add_verdict("bari_tail_small", tail_ok);
  if (is_hermitian(spec)) {
    const double defect = std::max(std::abs(frame.first - 1.0),
                                   std::abs(frame.second - 1.0));
    std::ostringstream detail;
    detail << "max |bound - 1| = " << format_value(defect);
    report.add_verdict("hermitian_frame_bounds", defect <= 1e-8,
                       detail.str());
  }
  return report;
}

Report cmd_bands(const RunConfig& config) {
  validate(config);
  Report report("bands");
  report.set_config_echo(config_echo(config));

  PotentialSpec spec = load_stage(config);
  const Matrix C = mean_matrix(spec);
  const double shift = C.norm() + perturbation_l1_norm(spec);
  const int k_band = std::max(
      1, static_cast<int>(
             std::ceil(std::sqrt(std::max(config.window_hi + shift, 1.0)) /
                       kTwoPi)) +
             1);
  const int K = config.cutoff > 0
                    ? config.cutoff
                    : default_cutoff(k_band, spec.max_harmonic);
  const std::vector<double> t_grid = default_t_grid(config.t_points);

  const BandFamily family = stage("sweep", [&] {
    return sweep(spec, t_grid, full_range(k_band), K, config.rho);
  });

  Table& curves = report.add_table(
      "curves", {"k", "j", "t", "K", "re_lambda", "im_lambda", "matched",
                 "extrapolated", "deviation"});
  bool all_matched = true;
  for (const BandCurve& curve : family.curves) {
    for (const BandPoint& point : curve.points) {
      curves.add_row(curve.k, curve.j, point.t, K, point.lambda.real(),
                     point.lambda.imag(), static_cast<int>(point.matched),
                     static_cast<int>(point.extrapolated), point.deviation);
      if (!point.extrapolated) all_matched = all_matched && point.matched;
    }
  }
  report.add_verdict("curves_matched", all_matched);

  if (is_hermitian(spec)) {
    const RealBands real_bands = stage("band_union", [&] {
      return band_union_real(family, config.window_lo, config.window_hi);
    });
    Table& intervals = report.add_table("intervals", {"lo", "hi"});
    for (const auto& iv : real_bands.intervals) {
      intervals.add_row(iv.first, iv.second);
    }
    Table& gaps = report.add_table("gaps", {"lo", "hi"});
    for (const auto& gap : real_bands.gaps) {
      gaps.add_row(gap.first, gap.second);
    }
    std::ostringstream detail;
    if (real_bands.gaps.empty()) {
      detail << "no gaps in [" << format_value(config.window_lo) << ", "
             << format_value(config.window_hi) << "]";
    } else {
      detail << real_bands.gaps.size() << " gap(s), first ["
             << format_value(real_bands.gaps.front().first) << ", "
             << format_value(real_bands.gaps.front().second) << "]";
    }
    report.add_verdict("band_union", true, detail.str());
  } else {
    const double span = 10.0 * (1.0 + shift);
    const auto points = band_union_points(
        family, Complex(config.window_lo, -span),
        Complex(config.window_hi, span));
    Table& cloud = report.add_table("points", {"re_lambda", "im_lambda"});
    for (const Complex& z : points) cloud.add_row(z.real(), z.imag());
    std::ostringstream detail;
    detail << points.size() << " spectrum points inside the window";
    report.add_verdict("band_union", true, detail.str());
  }
  return report;
}

int run_command(const std::string& name, const RunConfig& config) {
  try {
    Report report = [&] {
      if (name == "spectrum") return cmd_spectrum(config);
      if (name == "verify") return cmd_verify(config);
      if (name == "regularity") return cmd_regularity(config);
      if (name == "riesz") return cmd_riesz(config);
      if (name == "bands") return cmd_bands(config);
      throw ConfigError("unknown command: " + name);
    }();
    report.print_summary(std::cout);
    if (!config.output_dir.empty()) report.write(config.output_dir);
    return report.all_passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qpsl
