#include <string>
#include <vector>

#include <CLI/CLI11.hpp>

#include "qpsl/commands.hpp"

namespace {

void add_common_flags(CLI::App* cmd, qpsl::RunConfig& config) {
  cmd->add_option("--potential", config.potential_path,
                  "JSON potential file");
  cmd->add_option("--k-max", config.k_max,
                  "largest |k| studied (Fourier index)");
  cmd->add_option("--k-min", config.k_min,
                  "smallest |k| admitted into asymptotic statistics");
  cmd->add_option("--cutoff", config.cutoff,
                  "Fourier truncation K (default: derived from k_max)");
  cmd->add_option("--rho", config.rho,
                  "disk-radius scale (default: derived from the potential)");
  cmd->add_option("--cluster-tol", config.cluster_tol,
                  "eigenvalue clustering tolerance (0 = automatic)");
  cmd->add_option("--angle-tol", config.angle_tol,
                  "rejection margin around degenerate quasimomenta");
  cmd->add_option("--drop-tol", config.drop_tol,
                  "Fourier coefficients below this are treated as zero");
  cmd->add_option("--seed", config.seed, "seed for randomized checks");
  cmd->add_option("--out", config.output_dir,
                  "directory for TSV tables and the JSON summary");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral toolkit for -y'' + Q(x) y with quasiperiodic boundary "
      "conditions y(1) = e^{it} y(0), y'(1) = e^{it} y'(0)"};
  app.require_subcommand(1);

  qpsl::RunConfig config;
  std::vector<double> t_values;

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "eigenvalues, disk pairing and decay fits at one t");
  CLI::App* verify = app.add_subcommand(
      "verify", "per-eigenpair identity checks at one t");
  CLI::App* regularity = app.add_subcommand(
      "regularity", "boundary-condition determinant diagnostics");
  CLI::App* riesz = app.add_subcommand(
      "riesz", "biorthogonal family, simplicity and frame diagnostics");
  CLI::App* bands = app.add_subcommand(
      "bands", "eigenvalue curves over the quasimomentum sweep");

  for (CLI::App* cmd : {spectrum, verify, regularity, riesz, bands}) {
    add_common_flags(cmd, config);
    cmd->add_option("--t", t_values,
                    "quasimomentum; may repeat to form a grid");
  }
  regularity->add_option("--m", config.m, "largest matrix size swept");
  bands->add_option("--t-points", config.t_points,
                    "grid points per half-interval of (0, 2pi)");
  bands->add_option("--window-lo", config.window_lo,
                    "lower edge of the reported spectral window");
  bands->add_option("--window-hi", config.window_hi,
                    "upper edge of the reported spectral window");

  CLI11_PARSE(app, argc, argv);

  if (!t_values.empty()) {
    config.t = t_values.front();
    config.t_list = t_values;
  }
  return qpsl::run_command(app.get_subcommands().front()->get_name(), config);
}
