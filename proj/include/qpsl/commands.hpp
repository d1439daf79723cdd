#pragma once

#include <string>
#include <vector>

#include "qpsl/asymptotics.hpp"
#include "qpsl/galerkin.hpp"
#include "qpsl/report.hpp"
#include "qpsl/types.hpp"

namespace qpsl {

struct RunConfig {
  std::string potential_path;
  double t = 1.0;
  std::vector<double> t_list;  // regularity grid; empty means default grid
  int m = 2;                   // matrix size for potential-free commands
  int k_max = 32;
  int k_min = kDefaultKMin;
  int cutoff = -1;      // Fourier cutoff K; -1 selects default_cutoff
  double rho = -1.0;    // disk-radius factor; -1 selects default_disk_rho
  double cluster_tol = 0.0;  // 0 selects the scale-relative default
  double angle_tol = kAngleTol;
  double drop_tol = 1e-12;
  unsigned long seed = 20240817;
  std::string output_dir;

  int t_points = 64;       // bands: grid points per half-interval
  double window_lo = 0.1;  // bands: real coverage window
  double window_hi = 100.0;
};

// Throws ConfigError on violated invariants (tolerances > 0, k_min >= 1,
// k_max > k_min, ...).
void validate(const RunConfig& config);

Report cmd_spectrum(const RunConfig& config);
Report cmd_verify(const RunConfig& config);
Report cmd_regularity(const RunConfig& config);
Report cmd_riesz(const RunConfig& config);
Report cmd_bands(const RunConfig& config);

// Dispatches by subcommand name, prints the summary, writes tables when
// output_dir is set. Returns the process exit code: 0 all checks pass,
// 1 checks failed, 2 configuration or runtime error.
int run_command(const std::string& name, const RunConfig& config);

}  // namespace qpsl
