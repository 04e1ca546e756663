#pragma once

#include <string>
#include <vector>

#include "dpm/runner.hpp"

namespace dpm {

struct RunConfig {
  std::string test_id = "d1";
  std::vector<int> meshes = {31};
  int harmonics = 0;  // 0 = test default
  int order = 2;
  std::string perturb;  // comma list of d, theta, phi
  std::uint64_t seed = 0;
  double t_final = 0.1;
  std::string out_dir;  // empty: DPM_OUT_DIR or current directory
  bool dump_bulk = false;
  bool dump_surface = false;
  int jobs = 1;
  bool verbose = false;

  /// Throws std::invalid_argument on a malformed configuration.
  void validate() const;
};

struct StudyResult {
  std::vector<RunResult> runs;  // one per mesh, in mesh order
  std::string csv_path;
};

/// Runs the configured meshes (optionally in parallel), writes the
/// convergence CSV and any requested dumps, and returns the per-mesh
/// results.  File writes are atomic (write to a temporary, then rename).
StudyResult run_study(const RunConfig& config);

/// Convergence-table CSV for a finished study; schema
///   N,E_inf_bulk,rate,...,cond_normal,seconds
/// with %.6e numbers and empty rate cells on the first row.
std::string format_csv(const std::vector<RunResult>& runs);

}  // namespace dpm
